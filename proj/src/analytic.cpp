#include "infinitesimal/analytic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "infinitesimal/errors.hpp"

namespace infinitesimal {

namespace {

std::vector<double> exp_taylor(double c, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  t[0] = std::exp(c);
  for (int k = 1; k < count; ++k) t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] / k;
  return t;
}

// Derivatives of sin cycle through sin, cos, -sin, -cos.
std::vector<double> trig_taylor(double c, int count, int phase) {
  const std::array<double, 4> cycle{std::sin(c), std::cos(c), -std::sin(c), -std::cos(c)};
  std::vector<double> t(static_cast<std::size_t>(count));
  double factorial = 1.0;
  for (int k = 0; k < count; ++k) {
    if (k > 0) factorial *= k;
    t[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>((k + phase) % 4)] / factorial;
  }
  return t;
}

std::vector<double> sin_taylor(double c, int count) { return trig_taylor(c, count, 0); }
std::vector<double> cos_taylor(double c, int count) { return trig_taylor(c, count, 1); }

std::vector<double> log_taylor(double c, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  t[0] = std::log(c);
  double power = 1.0;
  for (int k = 1; k < count; ++k) {
    power *= c;
    t[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) / (k * power);
  }
  return t;
}

std::vector<double> sqrt_taylor(double c, int count) { return pow_taylor(c, 0.5, count); }

// asin' = (1 - x^2)^(-1/2). Expand u(t) = 1 - (c + t)^2 and raise it to -1/2
// with the power-series recurrence, then integrate termwise.
std::vector<double> asin_taylor(double c, int count) {
  const std::array<double, 3> u{1.0 - c * c, -2.0 * c, -1.0};
  constexpr double r = -0.5;
  std::vector<double> w(static_cast<std::size_t>(count), 0.0);
  w[0] = std::pow(u[0], r);
  for (int k = 1; k < count; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(k, 2); ++j) {
      acc += (r * j - (k - j)) * u[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k - j)];
    }
    w[static_cast<std::size_t>(k)] = acc / (k * u[0]);
  }
  std::vector<double> t(static_cast<std::size_t>(count));
  t[0] = std::asin(c);
  for (int k = 1; k < count; ++k) t[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k - 1)] / k;
  return t;
}

bool everywhere(double) { return true; }
bool positive(double c) { return c > 0.0; }
bool inside_unit(double c) { return c > -1.0 && c < 1.0; }

constexpr std::array<FunctionCatalogEntry, 6> kCatalog{{
    {AnalyticFunction::Sin, "sin", everywhere, sin_taylor},
    {AnalyticFunction::Cos, "cos", everywhere, cos_taylor},
    {AnalyticFunction::Exp, "exp", everywhere, exp_taylor},
    {AnalyticFunction::Log, "log", positive, log_taylor},
    {AnalyticFunction::Sqrt, "sqrt", positive, sqrt_taylor},
    {AnalyticFunction::Asin, "asin", inside_unit, asin_taylor},
}};

// Evaluates Σ taylor[k] h^k where a = center + h, keeping every power of ε
// below the first one the input does not determine.
LaurentNumber compose(const LaurentNumber& a, double center, const std::vector<double>& taylor,
                      int precision) {
  const int order = a.order();
  const auto width = static_cast<std::size_t>(precision);
  std::vector<double> h(width, 0.0);
  const auto c = a.coeffs();
  const int first = center == 0.0 ? 0 : 1;
  for (std::size_t i = static_cast<std::size_t>(first); i < c.size(); ++i) {
    const int exponent = a.valuation() + static_cast<int>(i);
    if (exponent >= 1 && exponent < precision) h[static_cast<std::size_t>(exponent)] = c[i];
  }

  std::vector<double> result(width, 0.0);
  std::vector<double> magnitude(width, 0.0);
  std::vector<double> scratch(width), scratch_mag(width);
  for (std::size_t k = taylor.size(); k-- > 0;) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    std::fill(scratch_mag.begin(), scratch_mag.end(), 0.0);
    for (std::size_t i = 0; i < width; ++i) {
      if (result[i] == 0.0 && magnitude[i] == 0.0) continue;
      for (std::size_t j = 1; i + j < width; ++j) {
        if (h[j] == 0.0) continue;
        scratch[i + j] += result[i] * h[j];
        scratch_mag[i + j] += magnitude[i] * std::abs(h[j]);
      }
    }
    scratch[0] += taylor[k];
    scratch_mag[0] += std::abs(taylor[k]);
    result.swap(scratch);
    magnitude.swap(scratch_mag);
  }
  return LaurentNumber::from_coefficients(0, std::move(result), magnitude, order);
}

// Number of Taylor terms that can reach an exponent below `precision`.
int terms_needed(const LaurentNumber& a, double center, int precision) {
  int increment_valuation = a.valuation();
  if (center != 0.0) {
    increment_valuation = 1;
    const auto c = a.coeffs();
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (c[i] != 0.0) {
        increment_valuation = static_cast<int>(i);
        break;
      }
    }
  }
  return (precision - 1) / std::max(increment_valuation, 1) + 1;
}

double finite_standard_part(const LaurentNumber& a, std::string_view name) {
  if (classify(a) == Classification::Infinite) {
    throw MathError(ErrorCode::NoStandardPart,
                    std::string(name) + " of infinite element " + to_string(a) +
                        ": no standard part");
  }
  return standard_part(a);
}

}  // namespace

std::span<const FunctionCatalogEntry> function_catalog() { return kCatalog; }

const FunctionCatalogEntry& catalog_entry(AnalyticFunction f) {
  for (const auto& entry : kCatalog) {
    if (entry.id == f) return entry;
  }
  throw MathError(ErrorCode::InvalidArgument, "unknown analytic function");
}

std::optional<AnalyticFunction> find_analytic(std::string_view name) {
  for (const auto& entry : kCatalog) {
    if (entry.name == name) return entry.id;
  }
  return std::nullopt;
}

double evaluate_real(AnalyticFunction f, double x) {
  auto domain_error = [&](const char* what) {
    return MathError(ErrorCode::Domain,
                     std::string(catalog_entry(f).name) + "(" + format_real(x) + "): " + what);
  };
  switch (f) {
    case AnalyticFunction::Sin: return std::sin(x);
    case AnalyticFunction::Cos: return std::cos(x);
    case AnalyticFunction::Exp: return std::exp(x);
    case AnalyticFunction::Log:
      if (!(x > 0.0)) throw domain_error("argument must be positive");
      return std::log(x);
    case AnalyticFunction::Sqrt:
      if (!(x >= 0.0)) throw domain_error("argument must be non-negative");
      return std::sqrt(x);
    case AnalyticFunction::Asin:
      if (!(x >= -1.0 && x <= 1.0)) throw domain_error("argument must lie in [-1, 1]");
      return std::asin(x);
  }
  throw MathError(ErrorCode::InvalidArgument, "unknown analytic function");
}

LaurentNumber apply_analytic(AnalyticFunction f, const LaurentNumber& a) {
  const auto& entry = catalog_entry(f);
  const double center = finite_standard_part(a, entry.name);
  if (!entry.in_domain(center)) {
    throw MathError(ErrorCode::Domain, "standard part " + format_real(center) +
                                           " is outside the domain of " + std::string(entry.name));
  }
  if (a.is_zero()) return LaurentNumber::from_real(entry.taylor(0.0, 1)[0], a.order());
  const int precision = center == 0.0 ? a.precision_limit() : a.order();
  return compose(a, center, entry.taylor(center, terms_needed(a, center, precision)), precision);
}

LaurentNumber apply_analytic(std::string_view name, const LaurentNumber& a) {
  const auto f = find_analytic(name);
  if (!f) throw MathError(ErrorCode::InvalidArgument, "unknown analytic function " + std::string(name));
  return apply_analytic(*f, a);
}

std::vector<double> pow_taylor(double center, double exponent, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  t[0] = std::pow(center, exponent);
  for (int k = 1; k < count; ++k) {
    t[static_cast<std::size_t>(k)] =
        t[static_cast<std::size_t>(k - 1)] * (exponent - (k - 1)) / (k * center);
  }
  return t;
}

LaurentNumber apply_pow(const LaurentNumber& a, double exponent) {
  if (!std::isfinite(exponent)) throw MathError(ErrorCode::Domain, "non-finite exponent");
  if (exponent == std::trunc(exponent) && std::abs(exponent) <= 1 << 20) {
    return ipow(a, static_cast<long long>(exponent));
  }
  const double center = finite_standard_part(a, "pow");
  if (!(center > 0.0)) {
    throw MathError(ErrorCode::Domain, "non-integer power " + format_real(exponent) +
                                           " needs a positive standard part, got " +
                                           format_real(center));
  }
  const int precision = a.order();
  return compose(a, center, pow_taylor(center, exponent, terms_needed(a, center, precision)),
                 precision);
}

namespace {

LaurentNumber expansion_at(const Expr& f, double x0, int order) {
  const std::string var = sole_variable(f);
  return eval_field(f, var, LaurentNumber::from_real(x0, order) + LaurentNumber::epsilon(order));
}

}  // namespace

double derivative(const Expr& f, double x0, int order) {
  const std::string var = sole_variable(f);
  const LaurentNumber shifted = expansion_at(f, x0, order);
  const LaurentNumber base = eval_field(f, var, LaurentNumber::from_real(x0, order));
  const LaurentNumber quotient = (shifted - base) / LaurentNumber::epsilon(order);
  if (classify(quotient) == Classification::Infinite) {
    throw MathError(ErrorCode::NotDifferentiable,
                    "not differentiable at " + format_real(x0) + " (infinite quotient)");
  }
  return standard_part(quotient);
}

double nth_derivative(const Expr& f, double x0, int k, int order) {
  if (k < 0 || k >= order) {
    throw MathError(ErrorCode::BeyondOrder, "derivative order " + std::to_string(k) +
                                                " is beyond working order " +
                                                std::to_string(order));
  }
  const LaurentNumber expansion = expansion_at(f, x0, order);
  double factorial = 1.0;
  for (int j = 2; j <= k; ++j) factorial *= j;
  return factorial * expansion.coefficient(k);
}

}  // namespace infinitesimal
