#include "infinitesimal/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>

#include "infinitesimal/analytic.hpp"
#include "infinitesimal/errors.hpp"
#include "infinitesimal/microscope.hpp"

namespace infinitesimal {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  char op = 0;
  std::vector<Expr> children;
};

namespace {

constexpr std::string_view kBuiltinPi = "pi";

struct CatalogName {
  std::string_view name;
  int arity;
};

constexpr CatalogName kCallable[] = {
    {"sin", 1}, {"cos", 1},  {"exp", 1},  {"log", 1},        {"sqrt", 1},
    {"asin", 1}, {"abs", 1}, {"sign", 1}, {"blancmange", 1},
};

}  // namespace

bool is_catalog_function(std::string_view name) { return function_arity(name) >= 0; }

int function_arity(std::string_view name) {
  for (const auto& entry : kCallable) {
    if (entry.name == name) return entry.arity;
  }
  return -1;
}

Expr Expr::constant(double value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Constant;
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::variable(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Variable;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::negate(Expr operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Negate;
  node->children.push_back(std::move(operand));
  return Expr(std::move(node));
}

Expr Expr::binary(char op, Expr lhs, Expr rhs) {
  if (op != '+' && op != '-' && op != '*' && op != '/' && op != '^') {
    throw MathError(ErrorCode::InvalidArgument, std::string("unknown binary operator ") + op);
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Binary;
  node->op = op;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Expr(std::move(node));
}

Expr Expr::call(std::string name, std::vector<Expr> args) {
  const int arity = function_arity(name);
  if (arity < 0) throw MathError(ErrorCode::InvalidArgument, "unknown function " + name);
  if (static_cast<int>(args.size()) != arity) {
    throw MathError(ErrorCode::InvalidArgument, "bad arity for " + name);
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Call;
  node->name = std::move(name);
  node->children = std::move(args);
  return Expr(std::move(node));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
char Expr::op() const { return node_->op; }
std::span<const Expr> Expr::children() const { return node_->children; }

std::set<std::string> Expr::free_variables() const {
  std::set<std::string> out;
  std::function<void(const Expr&)> visit = [&](const Expr& e) {
    if (e.kind() == Kind::Variable && e.name() != kBuiltinPi) out.insert(e.name());
    for (const auto& child : e.children()) visit(child);
  };
  visit(*this);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.value == y.value && x.name == y.name && x.op == y.op &&
         x.children == y.children;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string_view text;
  double number = 0.0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "token '" + std::string(t.text) + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      t.kind = Tok::Ident;
      t.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return t;
    }
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      default:
        throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }
    t.text = text_.substr(pos_, 1);
    ++pos_;
    return t;
  }

 private:
  Token number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
      if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
        end = k;
        digits();
      }
    }
    Token t;
    t.kind = Tok::Number;
    t.pos = start;
    t.text = text_.substr(start, end - start);
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, t.number);
    if (ec != std::errc{} || ptr != text_.data() + end || !std::isfinite(t.number)) {
      throw SyntaxError(start, "malformed number '" + std::string(t.text) + "'");
    }
    pos_ = end;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  Expr parse_all() {
    Expr e = expr();
    if (current_.kind == Tok::RParen) throw SyntaxError(current_.pos, "unbalanced parenthesis");
    if (current_.kind != Tok::End) {
      throw SyntaxError(current_.pos, "unexpected " + describe(current_));
    }
    return e;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    while (current_.kind == Tok::Plus || current_.kind == Tok::Minus) {
      const char op = current_.kind == Tok::Plus ? '+' : '-';
      advance();
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (current_.kind == Tok::Star || current_.kind == Tok::Slash) {
      const char op = current_.kind == Tok::Star ? '*' : '/';
      advance();
      lhs = Expr::binary(op, std::move(lhs), factor());
    }
    return lhs;
  }

  Expr factor() {
    if (current_.kind == Tok::Minus) {
      advance();
      return Expr::negate(factor());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (current_.kind == Tok::Caret) {
      advance();
      return Expr::binary('^', std::move(base), factor());
    }
    return base;
  }

  Expr atom() {
    const Token t = current_;
    switch (t.kind) {
      case Tok::Number:
        advance();
        return Expr::constant(t.number);
      case Tok::Ident: {
        advance();
        if (current_.kind != Tok::LParen) return Expr::variable(std::string(t.text));
        const int arity = function_arity(t.text);
        if (arity < 0) throw SyntaxError(t.pos, "unknown function '" + std::string(t.text) + "'");
        const std::size_t open = current_.pos;
        advance();
        std::vector<Expr> args;
        args.push_back(expr());
        while (current_.kind == Tok::Comma) {
          advance();
          args.push_back(expr());
        }
        if (current_.kind != Tok::RParen) {
          if (current_.kind == Tok::End) throw SyntaxError(open, "unbalanced parenthesis");
          throw SyntaxError(current_.pos, "unexpected " + describe(current_));
        }
        advance();
        if (static_cast<int>(args.size()) != arity) {
          throw SyntaxError(t.pos, "bad arity: '" + std::string(t.text) + "' takes " +
                                       std::to_string(arity) + " argument(s), got " +
                                       std::to_string(args.size()));
        }
        return Expr::call(std::string(t.text), std::move(args));
      }
      case Tok::LParen: {
        advance();
        Expr inner = expr();
        if (current_.kind != Tok::RParen) {
          if (current_.kind == Tok::End) throw SyntaxError(t.pos, "unbalanced parenthesis");
          throw SyntaxError(current_.pos, "unexpected " + describe(current_));
        }
        advance();
        return inner;
      }
      case Tok::RParen:
        throw SyntaxError(t.pos, "unbalanced parenthesis");
      default:
        throw SyntaxError(t.pos, "unexpected " + describe(t));
    }
  }

  void advance() { current_ = lexer_.next(); }

  Lexer lexer_;
  Token current_;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Binary:
      switch (e.op()) {
        case '+':
        case '-': return 1;
        case '*':
        case '/': return 2;
        default: return 4;
      }
    case Expr::Kind::Negate: return 3;
    default: return 5;
  }
}

void print_to(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_to(e, out);
  if (wrap) out += ')';
}

void print_to(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      if (e.value() < 0) {
        out += "(" + format_real(e.value()) + ")";
      } else {
        out += format_real(e.value());
      }
      return;
    case Expr::Kind::Variable:
      out += e.name();
      return;
    case Expr::Kind::Negate:
      out += '-';
      print_wrapped(e.children()[0], precedence(e.children()[0]) < 3, out);
      return;
    case Expr::Kind::Call:
      out += e.name();
      out += '(';
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i > 0) out += ", ";
        print_to(e.children()[i], out);
      }
      out += ')';
      return;
    case Expr::Kind::Binary: {
      const Expr& lhs = e.children()[0];
      const Expr& rhs = e.children()[1];
      const int p = precedence(e);
      if (e.op() == '^') {
        print_wrapped(lhs, precedence(lhs) < 5, out);
        out += '^';
        print_wrapped(rhs, precedence(rhs) < 3, out);
        return;
      }
      print_wrapped(lhs, precedence(lhs) < p, out);
      if (p == 1) {
        out += ' ';
        out += e.op();
        out += ' ';
      } else {
        out += e.op();
      }
      print_wrapped(rhs, precedence(rhs) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw MathError(ErrorCode::Evaluation, std::string(what) + " produced a non-finite result");
  }
  return value;
}

double real_power(double base, double exponent) {
  if (base == 0.0 && exponent < 0.0) {
    throw MathError(ErrorCode::DivisionByZero, "negative power of zero");
  }
  if (base < 0.0 && exponent != std::trunc(exponent)) {
    throw MathError(ErrorCode::Domain, "non-integer power " + format_real(exponent) +
                                           " of negative base " + format_real(base));
  }
  return checked(std::pow(base, exponent), "power");
}

double real_call(const std::string& name, double x) {
  if (auto f = find_analytic(name)) return checked(evaluate_real(*f, x), name.c_str());
  if (name == "abs") return std::abs(x);
  if (name == "sign") return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  if (name == "blancmange") return blancmange(x);
  throw MathError(ErrorCode::InvalidArgument, "unknown function " + name);
}

LaurentNumber field_call(const std::string& name, const LaurentNumber& a) {
  if (find_analytic(name)) return apply_analytic(name, a);
  if (name == "abs" || name == "sign") {
    const auto tag = classify(a);
    if (tag == Classification::Zero || tag == Classification::Infinitesimal) {
      throw MathError(ErrorCode::NonAnalytic,
                      name + " is not analytic at an infinitesimal neighbourhood of 0");
    }
    const bool negative = a.coeffs().front() < 0.0;
    if (name == "abs") return negative ? -a : a;
    return LaurentNumber::from_real(negative ? -1.0 : 1.0, a.order());
  }
  throw MathError(ErrorCode::NonAnalytic, name + " cannot be applied to field elements");
}

LaurentNumber promote(const Value& v, int order) {
  if (const auto* x = std::get_if<LaurentNumber>(&v)) return *x;
  return LaurentNumber::from_real(std::get<double>(v), order);
}

int field_order(const Value& a, const Value& b) {
  if (const auto* x = std::get_if<LaurentNumber>(&a)) return x->order();
  return std::get<LaurentNumber>(b).order();
}

LaurentNumber field_power(const Value& base, const Value& exponent, int order) {
  if (const auto* r = std::get_if<double>(&exponent)) return apply_pow(promote(base, order), *r);
  const auto& y = std::get<LaurentNumber>(exponent);
  if (classify(y) != Classification::Infinite) {
    const auto parts = decompose(y);
    if (parts.infinitesimal_part.is_zero()) return apply_pow(promote(base, order), parts.standard);
  }
  // a^y = exp(y log a)
  if (const auto* a = std::get_if<double>(&base)) {
    if (!(*a > 0.0)) {
      throw MathError(ErrorCode::Domain, "base " + format_real(*a) +
                                             " of a field exponent must be positive");
    }
    return apply_analytic(AnalyticFunction::Exp, y * LaurentNumber::from_real(std::log(*a), order));
  }
  return apply_analytic(AnalyticFunction::Exp,
                        y * apply_analytic(AnalyticFunction::Log, std::get<LaurentNumber>(base)));
}

template <typename Lookup>
Value evaluate(const Expr& e, const Lookup& lookup) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value();
    case Expr::Kind::Variable:
      return lookup(e.name());
    case Expr::Kind::Negate: {
      Value v = evaluate(e.children()[0], lookup);
      if (auto* x = std::get_if<double>(&v)) return -*x;
      return -std::get<LaurentNumber>(v);
    }
    case Expr::Kind::Call: {
      Value v = evaluate(e.children()[0], lookup);
      if (const auto* x = std::get_if<double>(&v)) return real_call(e.name(), *x);
      return field_call(e.name(), std::get<LaurentNumber>(v));
    }
    case Expr::Kind::Binary: {
      const Value a = evaluate(e.children()[0], lookup);
      const Value b = evaluate(e.children()[1], lookup);
      const auto* x = std::get_if<double>(&a);
      const auto* y = std::get_if<double>(&b);
      if (x && y) {
        switch (e.op()) {
          case '+': return checked(*x + *y, "addition");
          case '-': return checked(*x - *y, "subtraction");
          case '*': return checked(*x * *y, "multiplication");
          case '/':
            if (*y == 0.0) throw MathError(ErrorCode::DivisionByZero, "division by zero");
            return checked(*x / *y, "division");
          default: return real_power(*x, *y);
        }
      }
      const int order = field_order(a, b);
      switch (e.op()) {
        case '+': return promote(a, order) + promote(b, order);
        case '-': return promote(a, order) - promote(b, order);
        case '*': return promote(a, order) * promote(b, order);
        case '/': return promote(a, order) / promote(b, order);
        default: return field_power(a, b, order);
      }
    }
  }
  throw MathError(ErrorCode::InvalidArgument, "malformed expression");
}

[[noreturn]] void unbound(std::string_view name) {
  throw MathError(ErrorCode::UnboundVariable, "unbound variable '" + std::string(name) + "'");
}

}  // namespace

Value eval(const Expr& e, const Environment& env) {
  return evaluate(e, [&](const std::string& name) -> Value {
    if (auto it = env.find(name); it != env.end()) return it->second;
    if (name == kBuiltinPi) return std::numbers::pi;
    unbound(name);
  });
}

double eval_real(const Expr& e, std::string_view variable, double x) {
  const Value v = evaluate(e, [&](const std::string& name) -> Value {
    if (name == variable) return x;
    if (name == kBuiltinPi) return std::numbers::pi;
    unbound(name);
  });
  return std::get<double>(v);
}

LaurentNumber eval_field(const Expr& e, std::string_view variable, const LaurentNumber& x) {
  const Value v = evaluate(e, [&](const std::string& name) -> Value {
    if (name == variable) return x;
    if (name == kBuiltinPi) return std::numbers::pi;
    unbound(name);
  });
  return promote(v, x.order());
}

std::string sole_variable(const Expr& e) {
  const auto vars = e.free_variables();
  if (vars.empty()) return "x";
  if (vars.size() > 1) {
    std::string names;
    for (const auto& v : vars) names += (names.empty() ? "" : ", ") + v;
    throw MathError(ErrorCode::InvalidArgument,
                    "expected an expression in one variable, found: " + names);
  }
  return *vars.begin();
}

}  // namespace infinitesimal
