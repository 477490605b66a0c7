#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace thermoset {

/// Immutable expression tree in one variable `x`.
///
/// Grammar accepted by `parse_expr`:
///
///     expr   := term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*
///     factor := '-' factor | power
///     power  := base ('^' rational)?
///     base   := number | 'x' | '(' expr ')' | ('exp'|'log') base
///
/// so `-x^2` is `-(x^2)`. Exponents are rationals such as `2`, `-1`,
/// `1/3` or `(-1/2)`.
class Expr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Log, Neg };

  static Expr constant(double v);
  static Expr variable();
  static Expr pow(Expr base, double exponent);
  static Expr exp(Expr arg);
  static Expr log(Expr arg);

  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);

  Kind kind() const noexcept;
  /// Constant value, or the exponent of a Pow node.
  double value() const noexcept;
  /// First operand (or sole operand for unary nodes).
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const noexcept { return kind() == Kind::Constant; }
  bool is_constant(double v) const noexcept { return is_constant() && value() == v; }

  /// Throws DomainError on log of a non-positive value, division by zero and
  /// non-integer powers of negative numbers.
  template <class T>
  T eval(T x) const;

  std::string str() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Kind k, double v, std::optional<Expr> a, std::optional<Expr> b);
  std::shared_ptr<const Node> node_;
};

Expr parse_expr(std::string_view src);

/// Exact derivative with respect to x; simplified only by constant folding.
Expr differentiate(const Expr& e);

double eval(const Expr& e, double x);

/// When e has the shape `x + E` (or `E + x`) returns E, so that f(x) - x can
/// be evaluated without cancellation.
std::optional<Expr> increment_over_identity(const Expr& e);

}  // namespace thermoset
