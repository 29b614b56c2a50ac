#include "infinitesimal/laurent.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>

#include "infinitesimal/errors.hpp"

namespace infinitesimal {

namespace {

void check_order(int order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw MathError(ErrorCode::InvalidArgument,
                    "truncation order " + std::to_string(order) + " outside [" +
                        std::to_string(kMinOrder) + ", " + std::to_string(kMaxOrder) + "]");
  }
}

void check_same_order(const LaurentNumber& a, const LaurentNumber& b) {
  if (a.order() != b.order()) {
    throw MathError(ErrorCode::OrderMismatch, "operands have truncation orders " +
                                                  std::to_string(a.order()) + " and " +
                                                  std::to_string(b.order()));
  }
}

void check_valuation(long long valuation) {
  if (valuation > kMaxValuation || valuation < -kMaxValuation) {
    throw MathError(ErrorCode::ValuationOverflow,
                    "valuation " + std::to_string(valuation) + " exceeds ±" +
                        std::to_string(kMaxValuation));
  }
}

}  // namespace

LaurentNumber::LaurentNumber(int order) {
  check_order(order);
  coeffs_.assign(static_cast<std::size_t>(order), 0.0);
}

LaurentNumber::LaurentNumber(int valuation, std::vector<double> coeffs)
    : valuation_(valuation), coeffs_(std::move(coeffs)) {}

LaurentNumber LaurentNumber::from_real(double r, int order) {
  if (!std::isfinite(r)) {
    throw MathError(ErrorCode::InvalidArgument, "cannot embed a non-finite real");
  }
  LaurentNumber x(order);
  x.coeffs_[0] = r;
  return x;
}

LaurentNumber LaurentNumber::epsilon(int order) { return monomial(1.0, 1, order); }

LaurentNumber LaurentNumber::monomial(double c, int exponent, int order) {
  if (!std::isfinite(c)) {
    throw MathError(ErrorCode::InvalidArgument, "non-finite coefficient");
  }
  LaurentNumber x(order);
  if (c == 0.0) return x;
  check_valuation(exponent);
  x.valuation_ = exponent;
  x.coeffs_[0] = c;
  return x;
}

LaurentNumber LaurentNumber::from_coefficients(int valuation, std::vector<double> coeffs,
                                               int order) {
  return from_coefficients(valuation, std::move(coeffs), {}, order);
}

LaurentNumber LaurentNumber::from_coefficients(int valuation, std::vector<double> coeffs,
                                               std::span<const double> magnitudes, int order) {
  check_order(order);
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      throw MathError(ErrorCode::Evaluation, "non-finite series coefficient");
    }
  }
  for (std::size_t i = 0; i < coeffs.size() && i < magnitudes.size(); ++i) {
    if (std::abs(coeffs[i]) <= kNormalizationTolerance * magnitudes[i]) coeffs[i] = 0.0;
  }
  auto first = std::find_if(coeffs.begin(), coeffs.end(), [](double c) { return c != 0.0; });
  if (first == coeffs.end()) return LaurentNumber(order);

  const auto shift = first - coeffs.begin();
  check_valuation(static_cast<long long>(valuation) + shift);
  std::vector<double> out(static_cast<std::size_t>(order), 0.0);
  const auto available = std::min<std::ptrdiff_t>(coeffs.end() - first, order);
  std::copy(first, first + available, out.begin());
  return LaurentNumber(valuation + static_cast<int>(shift), std::move(out));
}

double LaurentNumber::coefficient(int exponent) const {
  if (exponent >= precision_limit()) {
    throw MathError(ErrorCode::BeyondOrder, "coefficient of e^" + std::to_string(exponent) +
                                                " is beyond working order " +
                                                std::to_string(order()));
  }
  if (is_zero() || exponent < valuation_) return 0.0;
  return coeffs_[static_cast<std::size_t>(exponent - valuation_)];
}

double LaurentNumber::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

LaurentNumber LaurentNumber::operator-() const {
  LaurentNumber out = *this;
  for (double& c : out.coeffs_) c = c == 0.0 ? 0.0 : -c;
  return out;
}

LaurentNumber& LaurentNumber::operator+=(const LaurentNumber& rhs) {
  check_same_order(*this, rhs);
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;

  const int n = order();
  const int base = std::min(valuation_, rhs.valuation_);
  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> magnitude(static_cast<std::size_t>(n), 0.0);
  auto accumulate = [&](const LaurentNumber& x) {
    for (int i = 0; i < n; ++i) {
      const int k = base + i - x.valuation_;
      if (k < 0 || k >= n) continue;
      const double c = x.coeffs_[static_cast<std::size_t>(k)];
      sum[static_cast<std::size_t>(i)] += c;
      magnitude[static_cast<std::size_t>(i)] += std::abs(c);
    }
  };
  accumulate(*this);
  accumulate(rhs);
  return *this = from_coefficients(base, std::move(sum), magnitude, n);
}

LaurentNumber& LaurentNumber::operator-=(const LaurentNumber& rhs) { return *this += -rhs; }

LaurentNumber& LaurentNumber::operator*=(const LaurentNumber& rhs) {
  check_same_order(*this, rhs);
  const int n = order();
  if (is_zero() || rhs.is_zero()) return *this = LaurentNumber(n);

  std::vector<double> product(static_cast<std::size_t>(n), 0.0);
  std::vector<double> magnitude(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j <= k; ++j) {
      const double term = coeffs_[static_cast<std::size_t>(j)] *
                          rhs.coeffs_[static_cast<std::size_t>(k - j)];
      product[static_cast<std::size_t>(k)] += term;
      magnitude[static_cast<std::size_t>(k)] += std::abs(term);
    }
  }
  const long long valuation = static_cast<long long>(valuation_) + rhs.valuation_;
  check_valuation(valuation);
  return *this = from_coefficients(static_cast<int>(valuation), std::move(product), magnitude, n);
}

LaurentNumber& LaurentNumber::operator/=(const LaurentNumber& rhs) {
  check_same_order(*this, rhs);
  if (rhs.is_zero()) throw MathError(ErrorCode::DivisionByZero, "division by zero element");
  const int n = order();
  if (is_zero()) return *this;

  // Series long division: q_k = (a_k - Σ_{j=1..k} b_j q_{k-j}) / b_0.
  const double lead = rhs.coeffs_[0];
  std::vector<double> quotient(static_cast<std::size_t>(n), 0.0);
  std::vector<double> magnitude(static_cast<std::size_t>(n), 0.0);
  std::vector<double> abs_quotient(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double acc = coeffs_[static_cast<std::size_t>(k)];
    double mag = std::abs(acc);
    for (int j = 1; j <= k; ++j) {
      const double term = rhs.coeffs_[static_cast<std::size_t>(j)] *
                          quotient[static_cast<std::size_t>(k - j)];
      acc -= term;
      mag += std::abs(rhs.coeffs_[static_cast<std::size_t>(j)]) *
             abs_quotient[static_cast<std::size_t>(k - j)];
    }
    quotient[static_cast<std::size_t>(k)] = acc / lead;
    abs_quotient[static_cast<std::size_t>(k)] = mag / std::abs(lead);
    magnitude[static_cast<std::size_t>(k)] = mag / std::abs(lead);
  }
  const long long valuation = static_cast<long long>(valuation_) - rhs.valuation_;
  check_valuation(valuation);
  return *this = from_coefficients(static_cast<int>(valuation), std::move(quotient), magnitude, n);
}

LaurentNumber arith(ArithOp op, const LaurentNumber& a, const LaurentNumber& b) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
    case ArithOp::Neg: return -a;
  }
  throw MathError(ErrorCode::InvalidArgument, "unknown arithmetic operation");
}

LaurentNumber ipow(const LaurentNumber& x, long long exponent) {
  LaurentNumber result = LaurentNumber::from_real(1.0, x.order());
  if (exponent == 0) return result;
  if (x.is_zero() && exponent < 0) {
    throw MathError(ErrorCode::DivisionByZero, "negative power of the zero element");
  }
  LaurentNumber base = x;
  unsigned long long e = exponent < 0 ? 0ULL - static_cast<unsigned long long>(exponent)
                                      : static_cast<unsigned long long>(exponent);
  while (true) {
    if (e & 1ULL) result *= base;
    e >>= 1;
    if (e == 0) break;
    base *= base;
  }
  return exponent < 0 ? LaurentNumber::from_real(1.0, x.order()) / result : result;
}

Ordering compare(const LaurentNumber& a, const LaurentNumber& b, CompareMode mode) {
  check_same_order(a, b);
  const LaurentNumber diff = a - b;
  if (diff.is_zero()) {
    if (mode == CompareMode::Strict) {
      throw MathError(ErrorCode::Indistinguishable,
                      "indistinguishable at order " + std::to_string(a.order()));
    }
    return Ordering::Equal;
  }
  return diff.coeffs().front() > 0.0 ? Ordering::Greater : Ordering::Less;
}

Classification classify(const LaurentNumber& a) {
  if (a.is_zero()) return Classification::Zero;
  if (a.valuation() < 0) return Classification::Infinite;
  if (a.valuation() == 0) return Classification::Appreciable;
  return Classification::Infinitesimal;
}

Decomposition decompose(const LaurentNumber& a) {
  switch (classify(a)) {
    case Classification::Infinite:
      throw MathError(ErrorCode::NoStandardPart,
                      "infinite element " + to_string(a) + " has no standard part");
    case Classification::Zero:
    case Classification::Infinitesimal:
      return {0.0, a};
    case Classification::Appreciable:
      break;
  }
  const auto c = a.coeffs();
  std::vector<double> rest(c.begin() + 1, c.end());
  return {c.front(), LaurentNumber::from_coefficients(1, std::move(rest), a.order())};
}

double standard_part(const LaurentNumber& a) { return decompose(a).standard; }

LaurentNumber magnify(const LaurentNumber& x, const LaurentNumber& c, int power) {
  if (power < 1) throw MathError(ErrorCode::InvalidArgument, "magnification power must be >= 1");
  const LaurentNumber shifted = x - c;
  if (shifted.is_zero()) return shifted;
  const auto coeffs = shifted.coeffs();
  const long long valuation = static_cast<long long>(shifted.valuation()) - power;
  check_valuation(valuation);
  return LaurentNumber::from_coefficients(static_cast<int>(valuation),
                                          std::vector<double>(coeffs.begin(), coeffs.end()),
                                          shifted.order());
}

double realize(const LaurentNumber& a, std::int64_t n) {
  if (n < 1) throw MathError(ErrorCode::InvalidArgument, "realize requires n >= 1");
  if (a.is_zero()) return 0.0;
  const double base = static_cast<double>(n);
  double sum = 0.0;
  const auto c = a.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    const int exponent = a.valuation() + static_cast<int>(i);
    sum += c[i] * std::pow(base, -exponent);
  }
  if (!std::isfinite(sum)) {
    throw MathError(ErrorCode::Evaluation, "realization at n = " + std::to_string(n) +
                                               " is not finite");
  }
  return sum;
}

std::string_view to_string(Classification tag) {
  switch (tag) {
    case Classification::Zero: return "Zero";
    case Classification::Infinitesimal: return "Infinitesimal";
    case Classification::Appreciable: return "Appreciable";
    case Classification::Infinite: return "Infinite";
  }
  return "?";
}

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::Less: return "LT";
    case Ordering::Equal: return "EQ";
    case Ordering::Greater: return "GT";
  }
  return "?";
}

std::string format_real(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

std::string to_string(const LaurentNumber& a) {
  if (a.is_zero()) return "0";
  std::string out;
  const auto c = a.coeffs();
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    const int exponent = a.valuation() + static_cast<int>(i);
    const double magnitude = std::abs(c[i]);
    if (first) {
      if (c[i] < 0) out += '-';
    } else {
      out += c[i] < 0 ? " - " : " + ";
    }
    first = false;
    if (exponent == 0) {
      out += format_real(magnitude);
      continue;
    }
    if (magnitude != 1.0) out += format_real(magnitude);
    out += "e^" + std::to_string(exponent);
  }
  return out;
}

namespace {

class ElementParser {
 public:
  explicit ElementParser(std::string_view text) : text_(text) {}

  std::map<int, double> parse() {
    std::map<int, double> terms;
    skip_space();
    if (at_end()) fail("empty element");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = take() == '-' ? -1.0 : 1.0;
        skip_space();
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      first = false;
      auto [coefficient, exponent] = term();
      terms[exponent] += sign * coefficient;
      skip_space();
    }
    return terms;
  }

 private:
  std::pair<double, int> term() {
    double coefficient = 1.0;
    bool has_number = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coefficient = number();
      has_number = true;
      skip_space();
      if (peek() == '*') {
        ++pos_;
        skip_space();
        if (peek() != 'e') fail("expected 'e' after '*'");
      }
    }
    if (peek() != 'e') {
      if (!has_number) fail("expected a number or 'e'");
      return {coefficient, 0};
    }
    ++pos_;
    skip_space();
    if (peek() != '^') return {coefficient, 1};
    ++pos_;
    skip_space();
    return {coefficient, integer()};
  }

  double number() {
    // Scientific notation only when the 'e' is followed by a digit or a
    // signed digit, so "2e^1" stays 2·ε.
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
      if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
        end = k;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    if (ec != std::errc{} || ptr != text_.data() + end) fail("malformed number");
    pos_ = end;
    if (!std::isfinite(value)) fail("non-finite coefficient");
    return value;
  }

  int integer() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    int value = 0;
    const char* begin = text_.data() + start;
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("expected an integer exponent");
    }
    return value;
  }

  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char take() { return text_[pos_++]; }
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(pos_, message); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentNumber parse_element(std::string_view text, int order) {
  LaurentNumber result(order);
  for (const auto& [exponent, coefficient] : ElementParser(text).parse()) {
    result += LaurentNumber::monomial(coefficient, exponent, order);
  }
  return result;
}

}  // namespace infinitesimal
