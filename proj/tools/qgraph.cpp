#include <iostream>
#include <string>
#include <vector>

#include "qgraph/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto outcome = qgraph::run_command(args);
  (outcome.exit_code == 0 ? std::cout : std::cerr) << outcome.summary;
  return outcome.exit_code;
}
