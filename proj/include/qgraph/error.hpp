#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

enum class ErrorCode {
  kInvalidK,
  kInvalidArgs,
  kCycleOfDegreeTwo,
  kEmptyGraph,
  kNotResonant,
  kGraphMismatch,
  kZeroMode,
  kShapeMismatch,
  kKMismatch,
  kInvalidDx,
  kCflViolation,
  kParse,
};

std::string_view to_string(ErrorCode code);

// Thrown for domain failures. The code names the failed contract so callers
// (the CLI, the Python layer) can map it to an exit status or exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qgraph
