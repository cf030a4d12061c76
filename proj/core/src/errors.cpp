#include "sinai/errors.hpp"

namespace sinai {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotRecurrent: return "NotRecurrent";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DegenerateSupport: return "DegenerateSupport";
    case ErrorCode::DivergentTotal: return "DivergentTotal";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyWalk: return "EmptyWalk";
    case ErrorCode::BadBeta: return "BadBeta";
    case ErrorCode::BadDelta: return "BadDelta";
    case ErrorCode::BadExtremes: return "BadExtremes";
    case ErrorCode::NoValley: return "NoValley";
    case ErrorCode::UnknownStatistic: return "UnknownStatistic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sinai
