#include "infinitesimal/errors.hpp"

namespace infinitesimal {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::NoStandardPart: return "NO_STANDARD_PART";
    case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::ValuationOverflow: return "VALUATION_OVERFLOW";
    case ErrorCode::OrderMismatch: return "ORDER_MISMATCH";
    case ErrorCode::Indistinguishable: return "INDISTINGUISHABLE";
    case ErrorCode::BeyondOrder: return "BEYOND_ORDER";
    case ErrorCode::NotDifferentiable: return "NOT_DIFFERENTIABLE";
    case ErrorCode::NonAnalytic: return "NON_ANALYTIC";
    case ErrorCode::UnboundVariable: return "UNBOUND_VARIABLE";
    case ErrorCode::Evaluation: return "EVALUATION";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Syntax: return "SYNTAX";
  }
  return "UNKNOWN";
}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position),
      detail_(message) {}

}  // namespace infinitesimal
