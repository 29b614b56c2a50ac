#pragma once

/**
 * @file expr.hpp
 * @brief Expression trees over the numeric tower {real, LaurentNumber}.
 *
 * Grammar (whitespace-insensitive):
 *
 *     expr   := term (('+' | '-') term)*
 *     term   := factor (('*' | '/') factor)*
 *     factor := '-' factor | power
 *     power  := atom ('^' factor)?
 *     atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
 *
 * `^` is right-associative and binds tighter than unary minus, so "-x^2" is
 * -(x^2). There is no implicit multiplication. Callable identifiers are
 * sin, cos, exp, log, sqrt, asin, abs, sign and blancmange, all of arity 1.
 */

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infinitesimal/laurent.hpp"

namespace infinitesimal {

using Value = std::variant<double, LaurentNumber>;
using Environment = std::map<std::string, Value, std::less<>>;

class Expr {
 public:
  enum class Kind { Constant, Variable, Negate, Binary, Call };

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  /// `op` is one of + - * / ^.
  static Expr binary(char op, Expr lhs, Expr rhs);
  /// Validates the name against the catalog and the argument count.
  static Expr call(std::string name, std::vector<Expr> args);

  Kind kind() const noexcept;
  double value() const;
  const std::string& name() const;
  char op() const;
  std::span<const Expr> children() const;

  /// Variable names appearing in the tree, excluding the built-in `pi`
  /// when it is used unbound.
  std::set<std::string> free_variables() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool is_catalog_function(std::string_view name);
int function_arity(std::string_view name);

Expr parse(std::string_view text);

/// Canonical form with the fewest parentheses that still reparse to the same
/// tree.
std::string print(const Expr& e);

/// Mixed real/field evaluation. Reals meeting a field element are promoted
/// with LaurentNumber::from_real at the field element's order. The unbound
/// name `pi` evaluates to π.
Value eval(const Expr& e, const Environment& env);

/// Real evaluation with exactly one bound variable.
double eval_real(const Expr& e, std::string_view variable, double x);

/// Field evaluation with exactly one bound variable.
LaurentNumber eval_field(const Expr& e, std::string_view variable, const LaurentNumber& x);

/// The single free variable of `e`, or "x" for a constant expression. Throws
/// InvalidArgument when there is more than one.
std::string sole_variable(const Expr& e);

}  // namespace infinitesimal
