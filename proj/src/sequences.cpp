#include "infinitesimal/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "infinitesimal/errors.hpp"

namespace infinitesimal {

namespace {

void check_scan(double tol, std::int64_t horizon) {
  if (!(tol > 0.0)) throw MathError(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (horizon < kMinHorizon) {
    throw MathError(ErrorCode::InvalidArgument,
                    "horizon must be at least " + std::to_string(kMinHorizon));
  }
}

// values[i] = a_{i+1}
std::vector<double> sample(const SeqQuantity& seq, std::int64_t horizon) {
  std::vector<double> values(static_cast<std::size_t>(horizon));
  for (std::int64_t n = 1; n <= horizon; ++n) values[static_cast<std::size_t>(n - 1)] = seq(n);
  return values;
}

double at(const std::vector<double>& values, std::int64_t n) {
  return values[static_cast<std::size_t>(n - 1)];
}

int constant_sign(const std::vector<double>& values, std::int64_t from, std::int64_t to) {
  int sign = 0;
  for (std::int64_t n = from; n <= to; ++n) {
    const double v = at(values, n);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return 0;
    sign = s;
  }
  return sign;
}

// Probes horizon·2^k while the terms keep their sign and keep growing.
bool probes_cross_threshold(const SeqQuantity& seq, std::int64_t horizon, int sign, double last) {
  constexpr std::int64_t kIndexCeiling = std::int64_t{1} << 53;
  double previous = std::abs(last);
  for (int k = 1; k <= 40; ++k) {
    if (horizon > (kIndexCeiling >> k)) break;
    const std::int64_t n = horizon << k;
    double v = 0.0;
    try {
      v = seq(n);
    } catch (const MathError&) {
      return false;
    }
    if ((v > 0.0 ? 1 : (v < 0.0 ? -1 : 0)) != sign || std::abs(v) < previous) return false;
    previous = std::abs(v);
    if (previous > kDivergenceThreshold) return true;
  }
  return false;
}

std::int64_t strip_entry(const std::vector<double>& values, double limit, double eps,
                         std::int64_t horizon) {
  for (std::int64_t n = horizon; n >= 1; --n) {
    if (!(std::abs(at(values, n) - limit) < eps)) return n + 1;
  }
  return 1;
}

std::vector<Interval> merge_bins(const std::set<std::int64_t>& bins, double width) {
  std::vector<Interval> out;
  std::int64_t run_start = 0;
  std::int64_t previous = 0;
  bool open = false;
  for (std::int64_t b : bins) {
    if (open && b == previous + 1) {
      previous = b;
      continue;
    }
    if (open) out.push_back({static_cast<double>(run_start) * width, static_cast<double>(previous + 1) * width});
    run_start = previous = b;
    open = true;
  }
  if (open) out.push_back({static_cast<double>(run_start) * width, static_cast<double>(previous + 1) * width});
  return out;
}

bool bin_of(double v, double width, std::int64_t& bin) {
  const double scaled = std::floor(v / width);
  if (std::abs(scaled) > 1e15) return false;
  bin = static_cast<std::int64_t>(scaled);
  return true;
}

std::set<std::int64_t> bins_hit(const std::vector<double>& values, std::int64_t from,
                                std::int64_t to, double width) {
  std::set<std::int64_t> bins;
  for (std::int64_t n = from; n <= to; ++n) {
    std::int64_t b = 0;
    if (bin_of(at(values, n), width, b)) bins.insert(b);
  }
  return bins;
}

LimitReport classify_values(const SeqQuantity& seq, const std::vector<double>& values, double tol,
                            std::int64_t horizon) {
  LimitReport report;
  report.tolerance = tol;
  const std::int64_t tail_start = horizon - horizon / 10 + 1;

  const int sign = constant_sign(values, tail_start, horizon);
  if (sign != 0) {
    bool all_large = true;
    for (std::int64_t n = tail_start; n <= horizon; ++n) {
      if (!(std::abs(at(values, n)) > kDivergenceThreshold)) {
        all_large = false;
        break;
      }
    }
    const double last = at(values, horizon);
    const bool growing = std::abs(last) > std::abs(at(values, tail_start));
    if (all_large || (growing && probes_cross_threshold(seq, horizon, sign, last))) {
      report.kind = sign > 0 ? LimitReport::Kind::DivergesPlusInfinity
                             : LimitReport::Kind::DivergesMinusInfinity;
      report.tail_index = tail_start;
      return report;
    }
  }

  double mean = 0.0;
  for (std::int64_t n = tail_start; n <= horizon; ++n) mean += at(values, n);
  mean /= static_cast<double>(horizon - tail_start + 1);
  const std::int64_t entry = strip_entry(values, mean, tol, horizon);
  if (entry <= horizon / 2) {
    report.kind = LimitReport::Kind::Converges;
    report.limit = mean;
    report.tail_index = entry;
    return report;
  }

  const double width = 10.0 * tol;
  const std::int64_t half = horizon / 2;
  const std::int64_t three_quarters = horizon - horizon / 4;
  const auto early = bins_hit(values, half + 1, three_quarters, width);
  const auto late = bins_hit(values, three_quarters + 1, horizon, width);
  std::set<std::int64_t> recurrent;
  std::set_intersection(early.begin(), early.end(), late.begin(), late.end(),
                        std::inserter(recurrent, recurrent.end()));
  auto intervals = merge_bins(recurrent, width);
  const bool wide = intervals.size() == 1 && intervals.front().hi - intervals.front().lo >= 3 * width * (1 - 1e-9);
  if (intervals.size() >= 2 || wide) {
    report.kind = LimitReport::Kind::Clusters;
    report.clusters = std::move(intervals);
    report.tail_index = half + 1;
    return report;
  }
  report.kind = LimitReport::Kind::Undetermined;
  report.tail_index = entry;
  return report;
}

}  // namespace

SeqQuantity::SeqQuantity(Rule rule, std::string label, std::int64_t default_horizon)
    : rule_(std::move(rule)), label_(std::move(label)), default_horizon_(default_horizon) {
  if (!rule_) throw MathError(ErrorCode::InvalidArgument, "sequence rule is empty");
}

SeqQuantity SeqQuantity::from_expr(const Expr& e, std::string variable) {
  for (const auto& name : e.free_variables()) {
    if (name != variable) {
      throw MathError(ErrorCode::InvalidArgument, "sequence rule may only use the variable '" +
                                                      variable + "', found '" + name + "'");
    }
  }
  return SeqQuantity(
      [e, variable](std::int64_t n) { return eval_real(e, variable, static_cast<double>(n)); },
      print(e));
}

std::optional<SeqQuantity> SeqQuantity::builtin(std::string_view name) {
  if (name == "harmonic") {
    return SeqQuantity([](std::int64_t n) { return 1.0 / static_cast<double>(n); }, "harmonic");
  }
  if (name == "shuffled") {
    // 1/4, 1/3, 1/6, 1/5, 1/8, 1/7, ...
    return SeqQuantity(
        [](std::int64_t n) { return 1.0 / static_cast<double>(n + (n % 2 == 0 ? 1 : 3)); },
        "shuffled");
  }
  if (name == "alternating_cluster") {
    return SeqQuantity(
        [](std::int64_t n) {
          const double magnitude = 1.0 + 1.0 / static_cast<double>(n);
          return n % 2 == 0 ? magnitude : -magnitude;
        },
        "alternating_cluster");
  }
  if (name == "sine_integers") {
    return SeqQuantity([](std::int64_t n) { return std::sin(static_cast<double>(n)); },
                       "sine_integers");
  }
  return std::nullopt;
}

SeqQuantity SeqQuantity::from_text(std::string_view text) {
  if (auto named = builtin(text)) return *named;
  return from_expr(parse(text));
}

double SeqQuantity::operator()(std::int64_t n) const {
  double v = 0.0;
  try {
    v = rule_(n);
  } catch (const MathError& err) {
    throw MathError(err.code(), "sequence " + label_ + " at index " + std::to_string(n) + ": " +
                                    err.what());
  }
  if (!std::isfinite(v)) {
    throw MathError(ErrorCode::Evaluation,
                    "sequence " + label_ + " is not finite at index " + std::to_string(n));
  }
  return v;
}

SeqQuantity SeqQuantity::abs() const {
  return SeqQuantity([self = *this](std::int64_t n) { return std::abs(self(n)); },
                     "|" + label_ + "|", default_horizon_);
}

std::string_view to_string(LimitReport::Kind kind) {
  switch (kind) {
    case LimitReport::Kind::Converges: return "Converges";
    case LimitReport::Kind::DivergesPlusInfinity: return "DivergesPlusInfinity";
    case LimitReport::Kind::DivergesMinusInfinity: return "DivergesMinusInfinity";
    case LimitReport::Kind::Clusters: return "Clusters";
    case LimitReport::Kind::Undetermined: return "Undetermined";
  }
  return "?";
}

LimitReport limit_detect(const SeqQuantity& seq, double tol, std::int64_t horizon) {
  check_scan(tol, horizon);
  return classify_values(seq, sample(seq, horizon), tol, horizon);
}

bool is_infinitesimal_quantity(const SeqQuantity& seq, double tol, std::int64_t horizon) {
  const auto report = limit_detect(seq.abs(), tol, horizon);
  return report.kind == LimitReport::Kind::Converges && std::abs(report.limit) < tol;
}

StripReport epsilon_strip(const SeqQuantity& seq, double limit, double eps, std::int64_t horizon) {
  if (!(eps > 0.0)) throw MathError(ErrorCode::InvalidArgument, "strip halfwidth must be positive");
  check_scan(1.0, horizon);
  const auto values = sample(seq, horizon);
  StripReport report;
  report.entry_index = strip_entry(values, limit, eps, horizon);
  report.inside = report.entry_index <= horizon / 2;
  if (!report.inside) {
    for (std::int64_t n = horizon / 2 + 1; n <= horizon; ++n) {
      if (!(std::abs(at(values, n) - limit) < eps)) {
        report.first_violation_beyond = n;
        break;
      }
    }
  }
  return report;
}

std::vector<Interval> cluster_values(const SeqQuantity& seq, double resolution,
                                     std::int64_t horizon) {
  if (!(resolution > 0.0)) throw MathError(ErrorCode::InvalidArgument, "resolution must be positive");
  check_scan(1.0, horizon);
  std::set<std::int64_t> bins;
  for (std::int64_t n = horizon / 2 + 1; n <= horizon; ++n) {
    std::int64_t b = 0;
    if (bin_of(seq(n), resolution, b)) bins.insert(b);
  }
  return merge_bins(bins, resolution);
}

std::string_view to_string(ProbeReport::Kind kind) {
  switch (kind) {
    case ProbeReport::Kind::Continuous: return "continuous";
    case ProbeReport::Kind::Discontinuous: return "discontinuous";
    case ProbeReport::Kind::BecomesInfinite: return "becomes_infinite";
  }
  return "?";
}

namespace {

ProbeReport probe_point(const Expr& f, const std::string& var, double x0, const SeqQuantity& alpha,
                        double tol, std::int64_t horizon) {
  ProbeReport report;
  report.x0 = x0;
  const SeqQuantity moved(
      [&f, &var, &alpha, x0](std::int64_t n) { return eval_real(f, var, x0 + alpha(n)); },
      "f(x0 + alpha_n)");
  const auto moved_report = limit_detect(moved, tol, horizon);
  if (moved_report.kind == LimitReport::Kind::DivergesPlusInfinity ||
      moved_report.kind == LimitReport::Kind::DivergesMinusInfinity) {
    report.kind = ProbeReport::Kind::BecomesInfinite;
    report.evidence = moved_report;
    return report;
  }

  double base = 0.0;
  try {
    base = eval_real(f, var, x0);
  } catch (const MathError& err) {
    throw MathError(err.code(), "f is undefined at x0 = " + format_real(x0) + ": " + err.what());
  }
  const SeqQuantity increment(
      [&moved, base](std::int64_t n) { return moved(n) - base; }, "f(x0 + alpha_n) - f(x0)");
  report.evidence = limit_detect(increment, tol, horizon);
  const bool null = report.evidence.kind == LimitReport::Kind::Converges &&
                    std::abs(report.evidence.limit) < tol;
  report.kind = null ? ProbeReport::Kind::Continuous : ProbeReport::Kind::Discontinuous;
  return report;
}

void require_infinitesimal(const SeqQuantity& alpha, double tol, std::int64_t horizon) {
  if (!is_infinitesimal_quantity(alpha, tol, horizon)) {
    throw MathError(ErrorCode::InvalidArgument,
                    "increment " + alpha.label() + " is not an infinitesimal quantity");
  }
}

}  // namespace

ProbeReport continuity_probe(const Expr& f, double x0, const SeqQuantity& alpha, double tol,
                             std::int64_t horizon) {
  check_scan(tol, horizon);
  require_infinitesimal(alpha, tol, horizon);
  return probe_point(f, sole_variable(f), x0, alpha, tol, horizon);
}

IntervalProbeReport continuity_on_interval(const Expr& f, double lo, double hi,
                                           const SeqQuantity& alpha, double tol,
                                           std::int64_t horizon, int grid) {
  check_scan(tol, horizon);
  if (!(lo < hi)) throw MathError(ErrorCode::InvalidArgument, "interval needs lo < hi");
  if (grid < 1) throw MathError(ErrorCode::InvalidArgument, "interval grid needs at least 1 point");
  require_infinitesimal(alpha, tol, horizon);
  const std::string var = sole_variable(f);
  IntervalProbeReport report;
  for (int i = 1; i <= grid; ++i) {
    const double x0 = lo + (hi - lo) * i / (grid + 1);
    report.samples.push_back(probe_point(f, var, x0, alpha, tol, horizon));
    report.continuous = report.continuous && report.samples.back().kind == ProbeReport::Kind::Continuous;
  }
  return report;
}

std::string_view to_string(SideLimit::Kind kind) {
  switch (kind) {
    case SideLimit::Kind::Finite: return "Finite";
    case SideLimit::Kind::PlusInfinity: return "PlusInfinity";
    case SideLimit::Kind::MinusInfinity: return "MinusInfinity";
    case SideLimit::Kind::Clusters: return "Clusters";
  }
  return "?";
}

namespace {

SideLimit side_limit(const Expr& f, const std::string& var, double x0, double direction, double tol,
                     int max_exponent) {
  std::vector<double> values;
  double offset = 1.0;
  for (int k = 1; k <= max_exponent; ++k) {
    offset *= 0.5;
    const double x = x0 + direction * offset;
    if (x == x0) break;
    double v = 0.0;
    try {
      v = eval_real(f, var, x);
    } catch (const MathError& err) {
      throw MathError(err.code(), std::string("f is undefined on the ") +
                                      (direction < 0 ? "left" : "right") + " of " +
                                      format_real(x0) + ": " + err.what());
    }
    values.push_back(v);
  }
  if (values.size() < 2) {
    throw MathError(ErrorCode::InvalidArgument, "too few dyadic samples near " + format_real(x0));
  }

  SideLimit side;
  side.samples = static_cast<int>(values.size());
  const std::size_t count = values.size();
  const std::size_t tail_start = count - std::max<std::size_t>(count / 10, 1);
  bool all_large = true;
  int sign = 0;
  for (std::size_t i = tail_start; i < count; ++i) {
    const int s = values[i] > 0 ? 1 : (values[i] < 0 ? -1 : 0);
    if (!(std::abs(values[i]) > kDivergenceThreshold) || s == 0 || (sign != 0 && s != sign)) {
      all_large = false;
      break;
    }
    sign = s;
  }
  if (all_large) {
    side.kind = sign > 0 ? SideLimit::Kind::PlusInfinity : SideLimit::Kind::MinusInfinity;
    return side;
  }

  double mean = 0.0;
  for (std::size_t i = tail_start; i < count; ++i) mean += values[i];
  mean /= static_cast<double>(count - tail_start);
  std::size_t entry = 0;
  for (std::size_t i = count; i-- > 0;) {
    if (!(std::abs(values[i] - mean) < tol)) {
      entry = i + 1;
      break;
    }
  }
  if (entry <= count / 2) {
    side.kind = SideLimit::Kind::Finite;
    side.value = mean;
    return side;
  }
  side.kind = SideLimit::Kind::Clusters;
  const auto [lo, hi] = std::minmax_element(values.begin() + static_cast<std::ptrdiff_t>(count / 2), values.end());
  side.cluster = {*lo, *hi};
  return side;
}

}  // namespace

OneSidedLimits one_sided_limits(const Expr& f, double x0, double tol, int max_exponent) {
  if (!(tol > 0.0)) throw MathError(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (max_exponent < 2) throw MathError(ErrorCode::InvalidArgument, "max exponent must be >= 2");
  const std::string var = sole_variable(f);
  return {side_limit(f, var, x0, -1.0, tol, max_exponent),
          side_limit(f, var, x0, 1.0, tol, max_exponent)};
}

double fourier_partial_sum(double x, std::int64_t n) {
  // Neumaier-compensated summation.
  double sum = 0.0;
  double compensation = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double term = std::sin(static_cast<double>(k) * x) / static_cast<double>(k);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double sawtooth_closed_form(double x) {
  if (!(x > 0.0 && x < 2.0 * std::numbers::pi)) {
    throw MathError(ErrorCode::Domain, "closed form (pi - x)/2 holds only on (0, 2pi), got x = " +
                                           format_real(x));
  }
  return (std::numbers::pi - x) / 2.0;
}

bool verify_sawtooth_closed_form(std::int64_t m_oracle) {
  return std::abs(sawtooth_closed_form(1.0) - fourier_partial_sum(1.0, m_oracle)) < 1e-3;
}

SumTheoremTable sum_theorem_probe(std::span<const std::int64_t> n_list, std::int64_t m_oracle,
                                  std::optional<double> fixed_x) {
  if (m_oracle < 1) throw MathError(ErrorCode::InvalidArgument, "oracle term count must be >= 1");
  SumTheoremTable table;
  table.m_oracle = m_oracle;
  table.fixed_x = fixed_x;
  table.closed_form = verify_sawtooth_closed_form(m_oracle);
  for (std::int64_t n : n_list) {
    if (n < 1) throw MathError(ErrorCode::InvalidArgument, "sum theorem rows need n >= 1");
    SumTheoremRow row;
    row.n = n;
    row.x = fixed_x ? *fixed_x : 1.0 / static_cast<double>(n);
    row.partial = fourier_partial_sum(row.x, n);
    row.limit = table.closed_form ? sawtooth_closed_form(row.x) : fourier_partial_sum(row.x, m_oracle);
    row.error = row.limit - row.partial;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace infinitesimal
