#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tw {

enum class ErrorCode {
  // parsing
  MalformedHeader,
  LiteralOutOfRange,
  MissingTerminator,
  SyntaxError,
  UnsupportedDisjunction,
  // decompositions
  InvalidInputDecomposition,
  DecompositionMismatch,
  WidthLimitExceeded,
  // solving
  TooLargeForOracle,
  NotTight,
  SubSolverFailure,
  DepthExhaustedWithoutSubSolver,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for every recoverable failure in the library.
/// `line()` is 1-based and only meaningful for parse errors (0 otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace tw
