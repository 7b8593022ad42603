#include "nodetsp/error.hpp"

namespace nodetsp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSize: return "invalid-size";
    case ErrorCode::kInvalidTour: return "invalid-tour";
    case ErrorCode::kInsufficientCandidates: return "insufficient-candidates";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kAdapter: return "adapter";
    case ErrorCode::kMissingContext: return "missing-context";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kIncompletePredictions: return "incomplete-predictions";
    case ErrorCode::kDegenerateScores: return "degenerate-scores";
    case ErrorCode::kSizeCap: return "size-cap";
    case ErrorCode::kInvalidBaseline: return "invalid-baseline";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace nodetsp
