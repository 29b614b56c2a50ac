#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "infinitesimal/errors.hpp"
#include "infinitesimal/expr.hpp"
#include "infinitesimal/laurent.hpp"
#include "infinitesimal/sequences.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace infinitesimal;
using Kind = LimitReport::Kind;

namespace {

constexpr std::int64_t H = 100'000;

SeqQuantity seq(const char* text) { return SeqQuantity::from_text(text); }

SeqQuantity alpha() { return *SeqQuantity::builtin("harmonic"); }

// Partial sums of Σ (-1)^k a_k, accumulated once up front.
SeqQuantity alternating_partial_sums(double (*a)(double), std::int64_t horizon,
                                     std::vector<double>& table) {
  table.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  long double s = 0.0L;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    s += (k % 2 ? -1.0L : 1.0L) * a(static_cast<double>(k));
    table[static_cast<std::size_t>(k)] = static_cast<double>(s);
  }
  return SeqQuantity([&table](std::int64_t n) { return table.at(static_cast<std::size_t>(n)); },
                     "alternating partial sums");
}

}  // namespace

TEST_SUITE("sequences") {

TEST_CASE("built-in and parsed sequences") {
  const auto shuffled = *SeqQuantity::builtin("shuffled");
  const double expected[] = {1.0 / 4, 1.0 / 3, 1.0 / 6, 1.0 / 5, 1.0 / 8, 1.0 / 7};
  for (int n = 1; n <= 6; ++n) CHECK(shuffled(n) == expected[n - 1]);
  CHECK((*SeqQuantity::builtin("alternating_cluster"))(2) == 1.5);
  CHECK((*SeqQuantity::builtin("sine_integers"))(3) == std::sin(3.0));
  CHECK_FALSE(SeqQuantity::builtin("nope").has_value());
  CHECK(seq("n^2")(7) == 49.0);
  CHECK(seq("harmonic")(4) == 0.25);
  CHECK(seq("2").label() == "2");
  CHECK(seq("-n").abs()(3) == 3.0);
  CHECK_THROWS_AS(seq("x + n"), MathError);
  CHECK_THROWS_AS(seq("1 +"), SyntaxError);
}

TEST_CASE("rule failures name the index") {
  const auto s = seq("log(n - 5)");
  try {
    (void)limit_detect(s, 1e-3, 1000);
    FAIL("expected failure");
  } catch (const MathError& e) {
    CHECK(e.code() == ErrorCode::Domain);
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
  try {
    (void)s(5);
  } catch (const MathError& e) {
    CHECK(std::string(e.what()).find("index 5") != std::string::npos);
  }
}

TEST_CASE("limit_detect examples") {
  auto r = limit_detect(*SeqQuantity::builtin("shuffled"), 1e-3, H);
  CHECK(r.kind == Kind::Converges);
  CHECK(std::abs(r.limit) < 1e-3);
  CHECK(r.tail_index <= H / 2);

  r = limit_detect(*SeqQuantity::builtin("alternating_cluster"), 1e-3, H);
  REQUIRE(r.kind == Kind::Clusters);
  REQUIRE(r.clusters.size() == 2);
  CHECK(r.clusters[0].lo <= -1.0);
  CHECK(r.clusters[0].hi >= -1.0);
  CHECK(r.clusters[0].hi < -0.9);
  CHECK(r.clusters[1].lo <= 1.0);
  CHECK(r.clusters[1].lo > 0.9);
  CHECK(r.clusters[1].hi >= 1.0);

  CHECK(limit_detect(seq("n"), 1e-3, H).kind == Kind::DivergesPlusInfinity);
  CHECK(limit_detect(seq("-n^2"), 1e-3, H).kind == Kind::DivergesMinusInfinity);
  CHECK(limit_detect(seq("(-1)^n*n"), 1e-3, H).kind != Kind::DivergesPlusInfinity);
  r = limit_detect(seq("3 + 1/n"), 1e-3, H);
  CHECK(r.kind == Kind::Converges);
  CHECK(r.limit == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(limit_detect(seq("log(n)"), 1e-3, H).kind == Kind::Undetermined);
  CHECK(r.tolerance == 1e-3);

  CHECK_THROWS_AS(limit_detect(seq("n"), 0.0, H), MathError);
  CHECK_THROWS_AS(limit_detect(seq("n"), 1e-3, 99), MathError);
}

TEST_CASE("is_infinitesimal_quantity examples") {
  CHECK(is_infinitesimal_quantity(seq("1/n"), 1e-3, H));
  CHECK(is_infinitesimal_quantity(seq("0"), 1e-3, H));
  CHECK_FALSE(is_infinitesimal_quantity(seq("(-1)^n"), 1e-3, H));
  CHECK(is_infinitesimal_quantity(seq("(-1)^n/n"), 1e-3, H));
  CHECK_FALSE(is_infinitesimal_quantity(seq("1 + 1/n"), 1e-3, H));
}

TEST_CASE("epsilon_strip examples") {
  auto s = epsilon_strip(seq("1/n"), 0.0, 0.01, H);
  CHECK(s.inside);
  CHECK(s.entry_index == 101);
  s = epsilon_strip(seq("5"), 5.0, 1e-9, H);
  CHECK(s.inside);
  CHECK(s.entry_index == 1);
  s = epsilon_strip(seq("(-1)^n"), 1.0, 0.5, H);
  CHECK_FALSE(s.inside);
  CHECK(s.first_violation_beyond > H / 2);
  CHECK(s.first_violation_beyond % 2 == 1);
  CHECK_THROWS_AS(epsilon_strip(seq("1/n"), 0.0, 0.0, H), MathError);
}

TEST_CASE("cluster_values examples") {
  const auto start = std::chrono::steady_clock::now();
  const auto sine = cluster_values(*SeqQuantity::builtin("sine_integers"), 0.01, 1'000'000);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(sine.size() == 1);
  CHECK(sine[0].lo <= -0.99);
  CHECK(sine[0].hi >= 0.99);
  CHECK(seconds < 2.0);

  const auto two = cluster_values(*SeqQuantity::builtin("alternating_cluster"), 0.01, H);
  REQUIRE(two.size() == 2);
  CHECK(two[0].hi <= -0.99);
  CHECK(two[1].lo >= 0.99);

  const auto one = cluster_values(seq("1/n"), 0.01, H);
  REQUIRE(one.size() == 1);
  CHECK(one[0].lo <= 0.0);
  CHECK(one[0].hi >= 0.0);
  CHECK(one[0].hi - one[0].lo <= 0.0100001);
  CHECK_THROWS_AS(cluster_values(seq("1/n"), -1.0, H), MathError);
}

TEST_CASE("limits are unique and strips nest") {
  const char* convergent[] = {"1/n", "shuffled", "2 - 3/n^2", "(-1)^n/n", "sin(n)/n", "0.5 + exp(-n)", "7"};
  for (const char* text : convergent) {
    INFO(text);
    const auto s = seq(text);
    const auto r = limit_detect(s, 1e-4, H);
    REQUIRE(r.kind == Kind::Converges);
    std::int64_t previous = 0;
    for (double eps : {0.1, 0.01, 0.001}) {
      const auto strip = epsilon_strip(s, r.limit, eps, H);
      CHECK(strip.inside);
      CHECK(strip.entry_index >= previous);
      previous = strip.entry_index;
    }
  }
}

TEST_CASE("strip entry indices shrink as the strip widens") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> power(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = coef(rng);
    const double b = coef(rng);
    const double p = power(rng);
    const SeqQuantity s([=](std::int64_t n) { return c + b / std::pow(static_cast<double>(n), p); },
                        "c + b/n^p");
    std::int64_t previous = H + 1;
    for (double eps : {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0}) {
      const auto strip = epsilon_strip(s, c, eps, H);
      if (!strip.inside) continue;
      CHECK(strip.entry_index <= previous);
      previous = strip.entry_index;
    }
    CHECK(previous <= H);
  }
}

TEST_CASE("alternating series converge between consecutive partial sums") {
  struct Case {
    double (*a)(double);
    double sum;
  };
  // Σ_{k≥1} (-1)^k a_k: -ln 2, -π²/12, -(1 - √2)ζ(1/2) with ζ(1/2) ≈ -1.4603545.
  const Case cases[] = {
      {[](double k) { return 1.0 / k; }, -std::numbers::ln2},
      {[](double k) { return 1.0 / (k * k); }, -std::numbers::pi * std::numbers::pi / 12.0},
      {[](double k) { return 1.0 / std::sqrt(k); }, -0.6048986434216303},
  };
  for (const auto& c : cases) {
    std::vector<double> table;
    const auto partial = alternating_partial_sums(c.a, H, table);
    const auto r = limit_detect(partial, 1e-2, H);
    REQUIRE(r.kind == Kind::Converges);
    CHECK(std::abs(r.limit - c.sum) < 1e-2);
    for (std::int64_t n = 1; n < 1000; ++n) {
      const double lo = std::min(table[n], table[n + 1]);
      const double hi = std::max(table[n], table[n + 1]);
      CHECK(lo <= c.sum);
      CHECK(c.sum <= hi);
    }
  }
}

TEST_CASE("realized Laurent polynomials are infinitesimal exactly when the element is") {
  testing_support::ElementGenerator gen(3);
  gen.order = 4;
  gen.min_valuation = -2;
  gen.max_valuation = 2;
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = trial == 0 ? LaurentNumber(4) : gen.element();
    const SeqQuantity s([a](std::int64_t n) { return realize(a, n); }, "realize");
    const auto c = classify(a);
    INFO(to_string(a));
    CHECK(is_infinitesimal_quantity(s, 1e-3, H) ==
          (c == Classification::Infinitesimal || c == Classification::Zero));
  }
}

TEST_CASE("continuity_probe examples") {
  auto p = continuity_probe(parse("sin(x)"), 0.7, alpha(), 1e-3, H);
  CHECK(p.kind == ProbeReport::Kind::Continuous);
  p = continuity_probe(parse("1/x"), 0.0, alpha(), 1e-3, H);
  CHECK(p.kind == ProbeReport::Kind::BecomesInfinite);
  p = continuity_probe(parse("sign(x)"), 0.0, alpha(), 1e-3, H);
  REQUIRE(p.kind == ProbeReport::Kind::Discontinuous);
  CHECK(p.evidence.kind == Kind::Converges);
  CHECK(p.evidence.limit == doctest::Approx(1.0));
  p = continuity_probe(parse("0.5 + sign(x)/2"), 0.0, seq("-1/n"), 1e-3, H);
  REQUIRE(p.kind == ProbeReport::Kind::Discontinuous);
  CHECK(p.evidence.limit == doctest::Approx(-0.5));
  CHECK_THROWS_AS(continuity_probe(parse("sin(1/x)"), 0.0, alpha(), 1e-3, H), MathError);

  CHECK_THROWS_AS(continuity_probe(parse("sin(x)"), 0.0, seq("1"), 1e-3, H), MathError);
  CHECK_THROWS_AS(continuity_probe(parse("log(x)"), -1.0, alpha(), 1e-3, H), MathError);
}

TEST_CASE("elementary functions are continuous on their intervals") {
  struct Case {
    const char* f;
    double lo;
    double hi;
  };
  // a = 2, A = 3. The increments stay below 0.1 so that no grid point steps
  // onto the pole of 2/x.
  const auto small = seq("0.1/n");
  const Case cases[] = {{"2 + x", -5, 5},  {"2 - x", -5, 5},  {"2*x", -5, 5},   {"2/x", -5, 0},
                        {"2/x", 0, 5},     {"3^x", -3, 3},    {"sin(x)", -5, 5}, {"cos(x)", -5, 5}};
  for (const auto& c : cases) {
    INFO(c.f << " on (" << c.lo << ", " << c.hi << ")");
    const auto r = continuity_on_interval(parse(c.f), c.lo, c.hi, small, 1e-3, H);
    CHECK(r.continuous);
    CHECK(r.samples.size() == 9);
  }
  CHECK(continuity_probe(parse("2/x"), 0.0, alpha(), 1e-3, H).kind == ProbeReport::Kind::BecomesInfinite);
  const auto across = continuity_on_interval(parse("2/x"), -5, 5, small, 1e-3, H);
  CHECK_FALSE(across.continuous);
  int infinite = 0;
  for (const auto& s : across.samples) {
    if (s.kind == ProbeReport::Kind::BecomesInfinite) {
      ++infinite;
      CHECK(s.x0 == 0.0);
    }
  }
  CHECK(infinite == 1);
  CHECK_THROWS_AS(continuity_on_interval(parse("x"), 1, 0, alpha(), 1e-3, H), MathError);
}

TEST_CASE("one-sided limits") {
  auto r = one_sided_limits(parse("1/x"), 0.0, 1e-3);
  CHECK(r.left.kind == SideLimit::Kind::MinusInfinity);
  CHECK(r.right.kind == SideLimit::Kind::PlusInfinity);

  r = one_sided_limits(parse("sin(1/x)"), 0.0, 1e-3);
  for (const auto& side : {r.left, r.right}) {
    REQUIRE(side.kind == SideLimit::Kind::Clusters);
    CHECK(side.cluster.lo < -0.9);
    CHECK(side.cluster.hi > 0.9);
  }

  r = one_sided_limits(parse("sin(x)"), 0.0, 1e-3);
  REQUIRE(r.left.kind == SideLimit::Kind::Finite);
  REQUIRE(r.right.kind == SideLimit::Kind::Finite);
  CHECK(std::abs(r.left.value) < 1e-3);
  CHECK(std::abs(r.right.value) < 1e-3);

  r = one_sided_limits(parse("sign(x - 1)"), 1.0, 1e-3);
  CHECK(r.left.value == -1.0);
  CHECK(r.right.value == 1.0);
  CHECK(r.left.samples > 2);
  CHECK(r.left.samples <= kDefaultMaxExponent);

  CHECK_THROWS_AS(one_sided_limits(parse("sqrt(x)"), 0.0, 1e-3), MathError);
}

TEST_CASE("sawtooth closed form") {
  CHECK(verify_sawtooth_closed_form(1'000'000));
  CHECK(sawtooth_closed_form(1.0) == doctest::Approx((std::numbers::pi - 1.0) / 2));
  CHECK_THROWS_AS(sawtooth_closed_form(0.0), MathError);
  CHECK_THROWS_AS(sawtooth_closed_form(7.0), MathError);
  for (double x : {0.001, 0.5, 1.0, 3.0}) {
    CHECK(fourier_partial_sum(x, 5000) == doctest::Approx(oracles::fourier_sum(x, 5000)).epsilon(1e-12));
  }
}

TEST_CASE("sum theorem along x = 1/n") {
  const std::vector<std::int64_t> ns = {10, 100, 1000, 10000};
  const auto table = sum_theorem_probe(ns, 1'000'000);
  CHECK(table.closed_form);
  REQUIRE(table.rows.size() == ns.size());
  const double si1 = oracles::sine_integral_at_one();
  CHECK(si1 == doctest::Approx(0.946083070367183).epsilon(1e-12));
  const auto& last = table.rows.back();
  CHECK(last.x == 1e-4);
  CHECK(std::abs(last.partial - si1) < 1e-4);
  CHECK(std::abs(last.error - (std::numbers::pi / 2 - si1)) < 1e-3);
  // The error stays away from zero instead of shrinking with n.
  for (const auto& row : table.rows) {
    const double x = 1.0 / static_cast<double>(row.n);
    const double oracle = (std::numbers::pi - x) / 2 - oracles::fourier_sum(x, row.n);
    CHECK(row.error == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(row.error > 0.5);
  }
}

TEST_CASE("sum theorem at a fixed point") {
  const std::vector<std::int64_t> ns = {10, 100, 1000, 10000};
  const auto table = sum_theorem_probe(ns, 1'000'000, 1.0);
  REQUIRE(table.fixed_x.has_value());
  CHECK(std::abs(table.rows.back().error) < 1e-3);
  CHECK(std::abs(table.rows.back().error) < std::abs(table.rows.front().error));
  CHECK_THROWS_AS(sum_theorem_probe(std::vector<std::int64_t>{0}, 1000), MathError);
}

}  // TEST_SUITE
