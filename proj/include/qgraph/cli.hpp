#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qgraph {

struct CommandOutcome {
  int exit_code = 0;  // 0 success, 1 domain error, 2 usage error
  std::vector<std::filesystem::path> artifacts;
  std::string summary;  // printed on stdout (stderr for failures)
};

// Runs one subcommand. `args` excludes the program name, e.g.
// {"spectrum", "--graph", "g.json", "--kmax", "1.4"}.
CommandOutcome run_command(const std::vector<std::string>& args);

}  // namespace qgraph
