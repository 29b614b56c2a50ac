#pragma once

// Random generators and comparison helpers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "infinitesimal/laurent.hpp"

namespace testing_support {

using infinitesimal::LaurentNumber;

struct ElementGenerator {
  std::mt19937_64 rng;
  int order = infinitesimal::kDefaultOrder;
  int min_valuation = -3;
  int max_valuation = 3;
  double coefficient_bound = 10.0;

  explicit ElementGenerator(std::uint64_t seed) : rng(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  /// Nonzero element with every tracked coefficient drawn uniformly; the
  /// leading one is kept away from zero so the valuation is the drawn one.
  LaurentNumber element() {
    std::vector<double> c(static_cast<std::size_t>(order));
    for (auto& x : c) x = real(-coefficient_bound, coefficient_bound);
    const double lead = real(0.5, coefficient_bound);
    c[0] = integer(0, 1) ? lead : -lead;
    return LaurentNumber::from_coefficients(integer(min_valuation, max_valuation), std::move(c), order);
  }

  LaurentNumber finite_element() {
    std::vector<double> c(static_cast<std::size_t>(order));
    for (auto& x : c) x = real(-coefficient_bound, coefficient_bound);
    const double lead = real(0.5, coefficient_bound);
    c[0] = integer(0, 1) ? lead : -lead;
    return LaurentNumber::from_coefficients(integer(0, max_valuation), std::move(c), order);
  }
};

/// Coefficient-wise agreement over the exponents both operands track,
/// relative to the larger coefficient magnitude.
inline bool approx_equal(const LaurentNumber& a, const LaurentNumber& b, double rel) {
  if (a.is_zero() && b.is_zero()) return true;
  if (a.is_zero() != b.is_zero()) return false;
  if (a.valuation() != b.valuation()) return false;
  const double scale = std::max({a.max_abs_coefficient(), b.max_abs_coefficient(), 1e-300});
  const int limit = std::min(a.precision_limit(), b.precision_limit());
  for (int e = a.valuation(); e < limit; ++e) {
    if (std::abs(a.coefficient(e) - b.coefficient(e)) > rel * scale) return false;
  }
  return true;
}

}  // namespace testing_support
