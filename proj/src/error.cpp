#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidK: return "INVALID_K";
    case ErrorCode::kInvalidArgs: return "INVALID_ARGS";
    case ErrorCode::kCycleOfDegreeTwo: return "CYCLE_OF_DEGREE_TWO";
    case ErrorCode::kEmptyGraph: return "EMPTY_GRAPH";
    case ErrorCode::kNotResonant: return "NOT_RESONANT";
    case ErrorCode::kGraphMismatch: return "GRAPH_MISMATCH";
    case ErrorCode::kZeroMode: return "ZERO_MODE";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kKMismatch: return "K_MISMATCH";
    case ErrorCode::kInvalidDx: return "INVALID_DX";
    case ErrorCode::kCflViolation: return "CFL_VIOLATION";
    case ErrorCode::kParse: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace qgraph
