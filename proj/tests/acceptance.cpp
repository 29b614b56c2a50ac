// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "derivative_catalog.hpp"
#include "expr_generator.hpp"
#include "infinitesimal/analytic.hpp"
#include "infinitesimal/expr.hpp"
#include "infinitesimal/laurent.hpp"
#include "infinitesimal/microscope.hpp"
#include "infinitesimal/sequences.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace infinitesimal;
using testing_support::approx_equal;
using testing_support::ElementGenerator;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

LaurentNumber real(double r) { return LaurentNumber::from_real(r); }

Ordering flip(Ordering o) {
  return o == Ordering::Less ? Ordering::Greater : (o == Ordering::Greater ? Ordering::Less : Ordering::Equal);
}

Outcome ordered_field() {
  const auto start = Clock::now();
  ElementGenerator gen(1);
  const LaurentNumber zero;
  int law_failures = 0;
  int order_failures = 0;
  int inverse_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = gen.element();
    const auto b = gen.element();
    const auto c = gen.element();
    law_failures += !approx_equal(a + b, b + a, 1e-9);
    law_failures += !approx_equal(a * b, b * a, 1e-9);
    law_failures += !approx_equal((a + b) + c, a + (b + c), 1e-9);
    law_failures += !approx_equal((a * b) * c, a * (b * c), 1e-9);
    law_failures += !approx_equal(a * (b + c), a * b + a * c, 1e-9);

    const Ordering ab = compare(a, b);
    order_failures += compare(b, a) != flip(ab);
    if (ab == Ordering::Less) order_failures += compare(a + c, b + c) != Ordering::Less;
    if (compare(a, zero) == Ordering::Greater && compare(b, zero) == Ordering::Greater) {
      order_failures += compare(a * b, zero) != Ordering::Greater;
    }
    inverse_failures += !approx_equal((real(1) / a) * a, real(1), 1e-9);
  }
  const double t = seconds_since(start);
  return {law_failures == 0 && order_failures == 0 && inverse_failures == 0 && t < 5.0,
          fmt("10000 triples: law failures %d, order failures %d, inverse failures %d, %.2f s (limit 5 s)",
              law_failures, order_failures, inverse_failures, t)};
}

Outcome structure_theorem() {
  ElementGenerator gen(2);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = gen.finite_element();
    const auto parts = decompose(x);
    const auto c = classify(parts.infinitesimal_part);
    failures += !(c == Classification::Zero || c == Classification::Infinitesimal);
    failures += !approx_equal(real(parts.standard) + parts.infinitesimal_part, x, 1e-12);
    for (double delta : {1e-6, -1e-6}) {
      failures += classify(x - real(parts.standard + delta)) != Classification::Appreciable;
    }
  }
  return {failures == 0, fmt("1000 finite elements, st +/- 1e-6 rejected as infinitesimal: failures %d", failures)};
}

Outcome microscope_identities() {
  ElementGenerator gen(3);
  const auto eps = LaurentNumber::epsilon();
  int failures = 0;
  double worst = 0.0;
  // Largest coefficient gap over the tracked window; a valuation mismatch
  // counts as an outright miss.
  auto deviation = [&worst](const LaurentNumber& got, const LaurentNumber& want) {
    if (got.valuation() != want.valuation()) return 1.0;
    double d = 0.0;
    const int limit = std::min(got.precision_limit(), want.precision_limit());
    for (int e = got.valuation(); e < limit; ++e) d = std::max(d, std::abs(got.coefficient(e) - want.coefficient(e)));
    worst = std::max(worst, d);
    return d;
  };
  for (int i = 0; i < 100; ++i) {
    const auto c = gen.finite_element();
    const double k = gen.real(-100.0, 100.0);
    failures += !magnify(c, c).is_zero();
    failures += deviation(magnify(c + eps, c), real(1)) > 1e-12;
    failures += deviation(magnify(c + real(k) * eps, c), real(k)) > 1e-12 * std::max(1.0, std::abs(k));
    failures += deviation(magnify(c + eps * eps, c), eps) > 1e-12;
  }
  return {failures == 0, fmt("100 random centers and k: failures %d, worst deviation %.3g (limit 1e-12)", failures, worst)};
}

Outcome derivative_catalog() {
  std::mt19937_64 rng(4);
  int failures = 0;
  int checked = 0;
  double worst_rel = 0.0;
  double worst_fd = 0.0;
  for (const auto& c : oracles::derivative_catalog()) {
    const Expr f = parse(c.text);
    std::uniform_real_distribution<double> dist(c.lo, c.hi);
    for (int i = 0; i < 20; ++i) {
      const double x0 = dist(rng);
      const double d = derivative(f, x0);
      const double rel = std::abs(d - c.df(x0)) / std::max(1.0, std::abs(c.df(x0)));
      const double fd = std::abs(d - oracles::central_difference(c.f, x0));
      worst_rel = std::max(worst_rel, rel);
      worst_fd = std::max(worst_fd, fd);
      failures += rel > 1e-9 || fd > 1e-6;
      ++checked;
    }
  }
  return {failures == 0 && checked == 240,
          fmt("%d cases: failures %d, worst closed-form rel %.3g (1e-9), worst central-difference abs %.3g (1e-6)",
              checked, failures, worst_rel, worst_fd)};
}

Outcome sum_theorem() {
  const double target = std::numbers::pi / 2 - oracles::sine_integral_at_one();
  const std::vector<std::int64_t> n = {10000};
  const auto along = sum_theorem_probe(n, 1'000'000);
  const auto fixed = sum_theorem_probe(n, 1'000'000, 1.0);
  const double e_along = along.rows[0].error;
  const double e_fixed = fixed.rows[0].error;
  const bool ok = std::abs(e_along - target) < 1e-3 && std::abs(e_fixed) < 1e-3;
  return {ok, fmt("n=1e4: error along x=1/n %.6f vs pi/2 - Si(1) = %.6f (|diff| < 1e-3); error at x=1 %.3g (< 1e-3)",
                  e_along, target, e_fixed)};
}

Outcome cluster_coverage() {
  const auto start = Clock::now();
  const auto sine = *SeqQuantity::builtin("sine_integers");
  const auto intervals = cluster_values(sine, 0.01, 1'000'000);
  const double t = seconds_since(start);
  const bool covered = intervals.size() == 1 && intervals[0].lo <= -1.0 && intervals[0].hi >= 1.0;
  // Independent count of the 200 bins of [-1, 1] hit beyond 5e5.
  std::vector<bool> hit(200, false);
  for (std::int64_t n = 500'001; n <= 1'000'000; ++n) {
    const int bin = std::min(199, static_cast<int>(std::floor((std::sin(static_cast<double>(n)) + 1.0) / 0.01)));
    hit[static_cast<std::size_t>(bin)] = true;
  }
  const int hits = static_cast<int>(std::count(hit.begin(), hit.end(), true));
  return {covered && hits == 200 && t < 2.0,
          fmt("sin(n), n <= 1e6: %zu merged interval(s) [%g, %g], oracle bins hit beyond 5e5: %d/200, %.2f s (limit 2 s)",
              intervals.size(), intervals.empty() ? 0.0 : intervals[0].lo, intervals.empty() ? 0.0 : intervals[0].hi,
              hits, t)};
}

Outcome epsilon_strip_entry() {
  const auto harmonic = epsilon_strip(SeqQuantity::from_text("1/n"), 0.0, 0.01, kDefaultHorizon);
  const auto constant = epsilon_strip(SeqQuantity::from_text("5"), 5.0, 0.01, kDefaultHorizon);
  const bool ok = harmonic.inside && harmonic.entry_index == 101 && constant.inside && constant.entry_index == 1;
  return {ok, fmt("1/n, L=0, eps=0.01: entry_index %lld (want 101); constant: entry_index %lld (want 1)",
                  static_cast<long long>(harmonic.entry_index), static_cast<long long>(constant.entry_index))};
}

Outcome local_straightness() {
  auto sin_s = [](double w) { return straightness(frame([](double x) { return std::sin(x); }, 0.3, w, 257)); };
  double ratio_lo = INFINITY;
  double ratio_hi = -INFINITY;
  for (int k = 6; k < 12; ++k) {
    const double w = std::ldexp(1.0, -k);
    const double ratio = sin_s(w) / sin_s(w / 2);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
  }
  const bool ratio_ok = ratio_lo >= 3.5 && ratio_hi <= 4.5;

  double blanc_min = INFINITY;
  for (int k = 4; k <= 14; ++k) {
    const double w = std::ldexp(1.0, -k);
    blanc_min = std::min(blanc_min, straightness(frame([](double x) { return blancmange(x); }, 1.0 / 3.0, w, 257)));
  }
  const bool blanc_ok = blanc_min >= 0.05;
  const double third = std::abs(blancmange(1.0 / 3.0, 40) - 2.0 / 3.0);
  const bool third_ok = third <= 1e-9;
  return {ratio_ok && blanc_ok && third_ok,
          fmt("sin at 0.3 halving ratio in [%.4f, %.4f] (want [3.5, 4.5]: %s); blancmange at 1/3 min %.4f over "
              "k=4..14 (want >= 0.05: %s); |B(1/3) - 2/3| = %.2g (want <= 1e-9: %s)",
              ratio_lo, ratio_hi, ratio_ok ? "ok" : "NOT MET", blanc_min, blanc_ok ? "ok" : "NOT MET", third,
              third_ok ? "ok" : "NOT MET")};
}

Outcome parser() {
  testing_support::TreeGenerator gen(9);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expr t = gen.tree(8);
    failures += !(parse(print(t)) == t);
  }
  const Expr x = Expr::variable("x");
  int golden = 0;
  golden += parse("sin(1/x)") == Expr::call("sin", {Expr::binary('/', Expr::constant(1), x)});
  golden += parse("x^2 + y^2") == Expr::binary('+', Expr::binary('^', x, Expr::constant(2)),
                                                Expr::binary('^', Expr::variable("y"), Expr::constant(2)));
  golden += parse("a+b*c^d") ==
            Expr::binary('+', Expr::variable("a"),
                         Expr::binary('*', Expr::variable("b"), Expr::binary('^', Expr::variable("c"), Expr::variable("d"))));
  return {failures == 0 && golden == 3,
          fmt("1000 random trees: round-trip failures %d; golden structure tests %d/3", failures, golden)};
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out;
  std::ostringstream err;
  code = cli::run(args, out, err);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"fig7b", "fig5"}) {
    int c1 = 0;
    int c2 = 0;
    const std::string first = run_cli({"figure", name}, c1);
    const std::string second = run_cli({"figure", name}, c2);
    const std::string golden = slurp(std::string(GOLDEN_DIR) + "/" + name + ".svg");
    const bool same = c1 == 0 && c2 == 0 && !first.empty() && first == second;
    const bool matches = !golden.empty() && first == golden;
    ok = ok && same && matches;
    detail += fmt("%s: %zu bytes, runs identical %s, golden %s; ", name, first.size(), same ? "yes" : "no",
                  matches ? "matches" : "differs");
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"ordered-field suite", ordered_field},
      {"structure theorem", structure_theorem},
      {"microscope identities", microscope_identities},
      {"derivative catalog", derivative_catalog},
      {"sum theorem", sum_theorem},
      {"cluster coverage", cluster_coverage},
      {"epsilon strip", epsilon_strip_entry},
      {"local straightness", local_straightness},
      {"parser", parser},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
