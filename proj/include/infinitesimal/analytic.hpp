#pragma once

// Elementary analytic functions over the Laurent field, and derivatives as
// standard parts of infinitesimal difference quotients.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "infinitesimal/expr.hpp"
#include "infinitesimal/laurent.hpp"

namespace infinitesimal {

enum class AnalyticFunction { Sin, Cos, Exp, Log, Sqrt, Asin };

struct FunctionCatalogEntry {
  AnalyticFunction id;
  std::string_view name;
  /// Open domain for field arguments, tested on the standard part.
  bool (*in_domain)(double center);
  /// f^(k)(center)/k! for k = 0..count-1.
  std::vector<double> (*taylor)(double center, int count);
};

std::span<const FunctionCatalogEntry> function_catalog();
const FunctionCatalogEntry& catalog_entry(AnalyticFunction f);
std::optional<AnalyticFunction> find_analytic(std::string_view name);

/// Ordinary real evaluation with closed-domain checks (log(0) fails,
/// sqrt(0) = 0, asin(1) = π/2).
double evaluate_real(AnalyticFunction f, double x);

/// f(st + h) = Σ taylor(st, k) h^k, truncated at working order.
LaurentNumber apply_analytic(AnalyticFunction f, const LaurentNumber& a);
LaurentNumber apply_analytic(std::string_view name, const LaurentNumber& a);

/// a^exponent for a real exponent. Integral exponents use repeated
/// multiplication; other exponents need a positive standard part.
LaurentNumber apply_pow(const LaurentNumber& a, double exponent);

/// Taylor coefficients of x^exponent about `center` (> 0).
std::vector<double> pow_taylor(double center, double exponent, int count);

/// st((f(x0 + ε) - f(x0)) / ε).
double derivative(const Expr& f, double x0, int order = kDefaultOrder);

/// k! times the coefficient of ε^k in f(x0 + ε), 0 <= k < order.
double nth_derivative(const Expr& f, double x0, int k, int order = kDefaultOrder);

}  // namespace infinitesimal
