#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sinai {

enum class ErrorCode {
  NotRecurrent,
  Degenerate,
  OutOfRange,
  InvalidWeights,
  NoSolution,
  DegenerateSupport,
  DivergentTotal,
  TooLarge,
  EmptyWalk,
  BadBeta,
  BadDelta,
  BadExtremes,
  NoValley,
  UnknownStatistic,
  InvalidArgument,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class SinaiError : public std::runtime_error {
 public:
  SinaiError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sinai
