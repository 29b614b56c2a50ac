#pragma once

/**
 * @file laurent.hpp
 * @brief The ordered field of truncated Laurent series in a positive
 *        infinitesimal ε.
 *
 * An element is stored as ε^v · (c_0 + c_1 ε + ... + c_{N-1} ε^{N-1}) with
 * c_0 != 0 for nonzero elements. Every operation is exact modulo the first
 * untracked power ε^(v+N) ("at working order").
 *
 * @code
 * auto eps = LaurentNumber::epsilon();
 * auto x = LaurentNumber::from_real(1) - eps;         // just less than 1
 * compare(x, LaurentNumber::from_real(1));             // Ordering::Less
 * decompose(x);                                        // {1, -ε}
 * @endcode
 */

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infinitesimal {

inline constexpr int kDefaultOrder = 12;
inline constexpr int kMinOrder = 4;
inline constexpr int kMaxOrder = 64;
inline constexpr int kMaxValuation = 64;

/// Coefficients whose magnitude is at most this fraction of the magnitude of
/// the terms that produced them are treated as cancelled to zero.
inline constexpr double kNormalizationTolerance = 1e-12;

enum class Classification { Zero, Infinitesimal, Appreciable, Infinite };

enum class Ordering { Less, Equal, Greater };

enum class CompareMode {
  AtWorkingOrder,  ///< difference that vanishes at order N compares Equal
  Strict,          ///< such a difference raises Indistinguishable instead
};

enum class ArithOp { Add, Sub, Mul, Div, Neg };

class LaurentNumber {
 public:
  /// The zero element at the given truncation order.
  explicit LaurentNumber(int order = kDefaultOrder);

  static LaurentNumber from_real(double r, int order = kDefaultOrder);
  static LaurentNumber epsilon(int order = kDefaultOrder);
  /// c · ε^exponent.
  static LaurentNumber monomial(double c, int exponent, int order = kDefaultOrder);

  /// Builds ε^valuation · Σ coeffs[i] ε^i and normalizes it. `coeffs` may be
  /// shorter or longer than `order`; extra trailing entries are truncated
  /// after normalization.
  static LaurentNumber from_coefficients(int valuation, std::vector<double> coeffs,
                                         int order = kDefaultOrder);

  /// As above, with `magnitudes[i]` bounding the absolute size of the terms
  /// summed into `coeffs[i]`. Entries small relative to their magnitude are
  /// rounding residue and become zero.
  static LaurentNumber from_coefficients(int valuation, std::vector<double> coeffs,
                                         std::span<const double> magnitudes,
                                         int order = kDefaultOrder);

  int valuation() const noexcept { return valuation_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.front() == 0.0; }

  /// Exponent of the first power of ε that is not tracked.
  int precision_limit() const noexcept { return valuation_ + order(); }

  /// Coefficient of ε^exponent; zero below the valuation. Throws BeyondOrder
  /// for exponents at or past precision_limit().
  double coefficient(int exponent) const;

  double max_abs_coefficient() const noexcept;

  LaurentNumber operator-() const;
  LaurentNumber& operator+=(const LaurentNumber& rhs);
  LaurentNumber& operator-=(const LaurentNumber& rhs);
  LaurentNumber& operator*=(const LaurentNumber& rhs);
  LaurentNumber& operator/=(const LaurentNumber& rhs);

  friend LaurentNumber operator+(LaurentNumber lhs, const LaurentNumber& rhs) { return lhs += rhs; }
  friend LaurentNumber operator-(LaurentNumber lhs, const LaurentNumber& rhs) { return lhs -= rhs; }
  friend LaurentNumber operator*(LaurentNumber lhs, const LaurentNumber& rhs) { return lhs *= rhs; }
  friend LaurentNumber operator/(LaurentNumber lhs, const LaurentNumber& rhs) { return lhs /= rhs; }

  /// Structural (bitwise coefficient) equality; use compare() for the order.
  friend bool operator==(const LaurentNumber&, const LaurentNumber&) = default;

 private:
  LaurentNumber(int valuation, std::vector<double> coeffs);

  int valuation_ = 0;
  std::vector<double> coeffs_;
};

LaurentNumber arith(ArithOp op, const LaurentNumber& a, const LaurentNumber& b);

/// Integer power by repeated squaring; negative exponents go through the
/// reciprocal. x^0 is 1.
LaurentNumber ipow(const LaurentNumber& x, long long exponent);

Ordering compare(const LaurentNumber& a, const LaurentNumber& b,
                 CompareMode mode = CompareMode::AtWorkingOrder);

Classification classify(const LaurentNumber& a);

struct Decomposition {
  double standard = 0.0;
  LaurentNumber infinitesimal_part;
};

/// Splits a finite element into its unique real part plus an infinitesimal.
/// Throws NoStandardPart for infinite elements.
Decomposition decompose(const LaurentNumber& a);
double standard_part(const LaurentNumber& a);

/// (x - c) / ε^power.
LaurentNumber magnify(const LaurentNumber& x, const LaurentNumber& c, int power = 1);

/// Value of the tracked representation at ε = 1/n.
double realize(const LaurentNumber& a, std::int64_t n);

std::string_view to_string(Classification tag);
std::string_view to_string(Ordering ordering);

/// Canonical text form, e.g. "3.5 + 2e^1 - 0.25e^3"; the zero element is "0".
std::string to_string(const LaurentNumber& a);

/// Parses the text form. Terms are `c`, `c e^k`, `c*e^k`, `e^k` or `e`;
/// repeated exponents accumulate.
LaurentNumber parse_element(std::string_view text, int order = kDefaultOrder);

/// Shortest decimal string that reads back to the same double.
std::string format_real(double value);

}  // namespace infinitesimal
