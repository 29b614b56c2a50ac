#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace infinitesimal {

enum class ErrorCode {
  Domain,
  NoStandardPart,
  DivisionByZero,
  ValuationOverflow,
  OrderMismatch,
  Indistinguishable,
  BeyondOrder,
  NotDifferentiable,
  NonAnalytic,
  UnboundVariable,
  Evaluation,
  InvalidArgument,
  Syntax,
};

/// Stable upper-case identifier used in machine-readable diagnostics.
std::string_view error_code_name(ErrorCode code);

/// Mathematical failure: domain violations, missing standard parts, overflow.
class MathError : public std::runtime_error {
 public:
  MathError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Expression text that does not match the grammar. `position` is a 0-based
/// byte offset into the input.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

}  // namespace infinitesimal
