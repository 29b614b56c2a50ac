#pragma once

/**
 * @file sequences.hpp
 * @brief Variable quantities: sequences n ↦ a_n examined up to a finite
 *        horizon.
 *
 * Every "for all n" statement here is checked on n ∈ [1, horizon] and is
 * evidence at that horizon, not proof. Recurrence ("infinitely often") is
 * approximated by "at some index beyond horizon/2".
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infinitesimal/expr.hpp"

namespace infinitesimal {

inline constexpr std::int64_t kDefaultHorizon = 1'000'000;
inline constexpr std::int64_t kMinHorizon = 100;
inline constexpr double kDivergenceThreshold = 1e9;

class SeqQuantity {
 public:
  using Rule = std::function<double(std::int64_t)>;

  SeqQuantity(Rule rule, std::string label, std::int64_t default_horizon = kDefaultHorizon);

  /// a_n = e evaluated with `variable` bound to n.
  static SeqQuantity from_expr(const Expr& e, std::string variable = "n");
  /// Parses `text` as an expression in n, or looks up a built-in name
  /// (harmonic, shuffled, alternating_cluster, sine_integers).
  static SeqQuantity from_text(std::string_view text);
  static std::optional<SeqQuantity> builtin(std::string_view name);

  /// Throws MathError tagged with the index when the rule fails or returns a
  /// non-finite value.
  double operator()(std::int64_t n) const;

  const std::string& label() const noexcept { return label_; }
  std::int64_t default_horizon() const noexcept { return default_horizon_; }

  SeqQuantity abs() const;

 private:
  Rule rule_;
  std::string label_;
  std::int64_t default_horizon_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct LimitReport {
  enum class Kind { Converges, DivergesPlusInfinity, DivergesMinusInfinity, Clusters, Undetermined };

  Kind kind = Kind::Undetermined;
  double limit = 0.0;               ///< meaningful for Converges
  std::vector<Interval> clusters;   ///< meaningful for Clusters
  std::int64_t tail_index = 0;
  double tolerance = 0.0;
};

std::string_view to_string(LimitReport::Kind kind);

/// Classifies a_1..a_horizon, in order of precedence:
///  - Diverges±: the last 10% share one sign and either all exceed 1e9 in
///    magnitude, or are growing and probes at horizon·2^k cross 1e9;
///  - Converges(L): L is the mean of the last 10%, and every term from
///    tail_index <= horizon/2 on lies within tol of L;
///  - Clusters: bins of width 10·tol hit in both the third and the fourth
///    quarter of the range form at least two intervals, or one interval at
///    least three bins wide;
///  - Undetermined otherwise.
LimitReport limit_detect(const SeqQuantity& seq, double tol, std::int64_t horizon);

/// limit_detect(|a_n|) converges with |L| < tol.
bool is_infinitesimal_quantity(const SeqQuantity& seq, double tol, std::int64_t horizon);

struct StripReport {
  bool inside = false;
  /// Smallest N with |a_n - L| < eps for all n in [N, horizon].
  std::int64_t entry_index = 0;
  /// For a failed strip: the first violating index beyond horizon/2.
  std::int64_t first_violation_beyond = 0;
};

/// The strip holds when its entry index is at most horizon/2.
StripReport epsilon_strip(const SeqQuantity& seq, double limit, double eps, std::int64_t horizon);

/// Width-`resolution` bins [k·r, (k+1)·r) hit at some index > horizon/2,
/// merged into maximal intervals, ascending.
std::vector<Interval> cluster_values(const SeqQuantity& seq, double resolution,
                                     std::int64_t horizon);

struct ProbeReport {
  enum class Kind { Continuous, Discontinuous, BecomesInfinite };

  Kind kind = Kind::Continuous;
  double x0 = 0.0;
  /// Behaviour of f(x0 + α_n) - f(x0), or of f(x0 + α_n) when it blows up.
  LimitReport evidence;
};

std::string_view to_string(ProbeReport::Kind kind);

/// Continuity in the sense "an infinitesimal increment of the variable
/// produces an infinitesimal increment of the function", tested along α.
ProbeReport continuity_probe(const Expr& f, double x0, const SeqQuantity& alpha, double tol,
                             std::int64_t horizon);

struct IntervalProbeReport {
  bool continuous = true;
  std::vector<ProbeReport> samples;
};

/// Probes `grid` equally spaced interior points of (lo, hi).
IntervalProbeReport continuity_on_interval(const Expr& f, double lo, double hi,
                                           const SeqQuantity& alpha, double tol,
                                           std::int64_t horizon, int grid = 9);

struct SideLimit {
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Clusters };

  Kind kind = Kind::Finite;
  double value = 0.0;   ///< Finite
  Interval cluster;     ///< Clusters: hull of the second half of the samples
  int samples = 0;
};

std::string_view to_string(SideLimit::Kind kind);

struct OneSidedLimits {
  SideLimit left;
  SideLimit right;
};

inline constexpr int kDefaultMaxExponent = 200;

/// Samples f at x0 ∓ 2^-k for k = 1..max_exponent (stopping once the offset
/// no longer changes x0) and classifies each side like limit_detect.
OneSidedLimits one_sided_limits(const Expr& f, double x0, double tol,
                                int max_exponent = kDefaultMaxExponent);

/// Σ_{k=1}^{n} sin(kx)/k.
double fourier_partial_sum(double x, std::int64_t n);

/// (π - x)/2, the pointwise limit of the partial sums on (0, 2π).
double sawtooth_closed_form(double x);

/// Whether the closed form agrees with the M-term partial sum at x = 1
/// within 1e-3.
bool verify_sawtooth_closed_form(std::int64_t m_oracle);

struct SumTheoremRow {
  std::int64_t n = 0;
  double x = 0.0;
  double partial = 0.0;   ///< s_n(x)
  double limit = 0.0;     ///< s(x)
  double error = 0.0;     ///< s(x) - s_n(x)
};

struct SumTheoremTable {
  bool closed_form = false;   ///< s(x) from (π - x)/2 rather than partial sums
  std::int64_t m_oracle = 0;
  std::optional<double> fixed_x;
  std::vector<SumTheoremRow> rows;
};

/// Error term s(x) - s_n(x) along x = 1/n, or at a fixed x when given.
SumTheoremTable sum_theorem_probe(std::span<const std::int64_t> n_list, std::int64_t m_oracle,
                                  std::optional<double> fixed_x = std::nullopt);

}  // namespace infinitesimal
