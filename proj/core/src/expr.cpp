#include "thermoset/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "thermoset/error.hpp"

namespace thermoset {

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  std::optional<Expr> a;
  std::optional<Expr> b;
};

Expr Expr::make(Kind k, double v, std::optional<Expr> a, std::optional<Expr> b) {
  return Expr(std::make_shared<const Node>(Node{k, v, std::move(a), std::move(b)}));
}

Expr Expr::constant(double v) { return make(Kind::Constant, v, std::nullopt, std::nullopt); }
Expr Expr::variable() { return make(Kind::Variable, 0.0, std::nullopt, std::nullopt); }

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
const Expr& Expr::lhs() const { return *node_->a; }
const Expr& Expr::rhs() const { return *node_->b; }

namespace {

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 1e15; }

template <class T>
T checked_pow(T base, double exponent) {
  if (base < 0 && !is_integer(exponent)) {
    throw DomainError("non-integer power of a negative number");
  }
  if (base == 0 && exponent < 0) throw DomainError("division by zero in negative power");
  if (is_integer(exponent)) {
    // Repeated squaring keeps small integer powers exact.
    long long n = static_cast<long long>(std::abs(exponent));
    T result = 1, b = base;
    while (n) {
      if (n & 1) result *= b;
      b *= b;
      n >>= 1;
    }
    return exponent < 0 ? T(1) / result : result;
  }
  return std::pow(base, static_cast<T>(exponent));
}

// Folds constants only when the result is well defined.
std::optional<double> try_fold(const auto& fn) {
  try {
    double v = fn();
    if (std::isfinite(v)) return v;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

}  // namespace

Expr operator+(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Expr::Kind::Add, 0.0, std::move(a), std::move(b));
}

Expr operator-(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -std::move(b);
  return Expr::make(Expr::Kind::Sub, 0.0, std::move(a), std::move(b));
}

Expr operator*(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::make(Expr::Kind::Mul, 0.0, std::move(a), std::move(b));
}

Expr operator/(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
    return Expr::constant(a.value() / b.value());
  }
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !(b.is_constant(0.0))) return Expr::constant(0.0);
  return Expr::make(Expr::Kind::Div, 0.0, std::move(a), std::move(b));
}

Expr operator-(Expr a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::Neg) return a.lhs();
  return Expr::make(Expr::Kind::Neg, 0.0, std::move(a), std::nullopt);
}

Expr Expr::pow(Expr base, double exponent) {
  if (exponent == 0.0) return constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    if (auto v = try_fold([&] { return checked_pow(base.value(), exponent); })) return constant(*v);
  }
  return make(Kind::Pow, exponent, std::move(base), std::nullopt);
}

Expr Expr::exp(Expr arg) {
  if (arg.is_constant()) return constant(std::exp(arg.value()));
  return make(Kind::Exp, 0.0, std::move(arg), std::nullopt);
}

Expr Expr::log(Expr arg) {
  if (arg.is_constant() && arg.value() > 0) return constant(std::log(arg.value()));
  return make(Kind::Log, 0.0, std::move(arg), std::nullopt);
}

template <class T>
T Expr::eval(T x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return static_cast<T>(n.value);
    case Kind::Variable:
      return x;
    case Kind::Add:
      return n.a->eval(x) + n.b->eval(x);
    case Kind::Sub:
      return n.a->eval(x) - n.b->eval(x);
    case Kind::Mul:
      return n.a->eval(x) * n.b->eval(x);
    case Kind::Div: {
      T den = n.b->eval(x);
      if (den == 0) throw DomainError("division by zero");
      return n.a->eval(x) / den;
    }
    case Kind::Pow:
      return checked_pow(n.a->eval(x), n.value);
    case Kind::Exp:
      return std::exp(n.a->eval(x));
    case Kind::Log: {
      T arg = n.a->eval(x);
      if (!(arg > 0)) throw DomainError("log of a non-positive value");
      return std::log(arg);
    }
    case Kind::Neg:
      return -n.a->eval(x);
  }
  return T(0);
}

template double Expr::eval<double>(double) const;
template long double Expr::eval<long double>(long double) const;

double eval(const Expr& e, double x) { return e.eval(x); }

namespace {

std::string number_str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string Expr::str() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return n.value < 0 ? "(" + number_str(n.value) + ")" : number_str(n.value);
    case Kind::Variable:
      return "x";
    case Kind::Add:
      return "(" + n.a->str() + " + " + n.b->str() + ")";
    case Kind::Sub:
      return "(" + n.a->str() + " - " + n.b->str() + ")";
    case Kind::Mul:
      return "(" + n.a->str() + " * " + n.b->str() + ")";
    case Kind::Div:
      return "(" + n.a->str() + " / " + n.b->str() + ")";
    case Kind::Pow:
      return n.a->str() + "^(" + number_str(n.value) + ")";
    case Kind::Exp:
      return "exp(" + n.a->str() + ")";
    case Kind::Log:
      return "log(" + n.a->str() + ")";
    case Kind::Neg:
      return "(-" + n.a->str() + ")";
  }
  return "?";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.value != y.value) return false;
  if (x.a.has_value() != y.a.has_value() || x.b.has_value() != y.b.has_value()) return false;
  if (x.a && !(*x.a == *y.a)) return false;
  if (x.b && !(*x.b == *y.b)) return false;
  return true;
}

Expr differentiate(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant:
      return Expr::constant(0.0);
    case K::Variable:
      return Expr::constant(1.0);
    case K::Add:
      return differentiate(e.lhs()) + differentiate(e.rhs());
    case K::Sub:
      return differentiate(e.lhs()) - differentiate(e.rhs());
    case K::Mul:
      return differentiate(e.lhs()) * e.rhs() + e.lhs() * differentiate(e.rhs());
    case K::Div: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      if (v.is_constant()) return differentiate(u) / v;
      return (differentiate(u) * v - u * differentiate(v)) / Expr::pow(v, 2.0);
    }
    case K::Pow:
      return Expr::constant(e.value()) * Expr::pow(e.lhs(), e.value() - 1.0) *
             differentiate(e.lhs());
    case K::Exp:
      return e * differentiate(e.lhs());
    case K::Log:
      return differentiate(e.lhs()) / e.lhs();
    case K::Neg:
      return -differentiate(e.lhs());
  }
  return Expr::constant(0.0);
}

std::optional<Expr> increment_over_identity(const Expr& e) {
  if (e.kind() != Expr::Kind::Add) return std::nullopt;
  if (e.lhs().kind() == Expr::Kind::Variable) return e.rhs();
  if (e.rhs().kind() == Expr::Kind::Variable) return e.lhs();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (src_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    if (end < src_.size() && std::isalnum(static_cast<unsigned char>(src_[end]))) return false;
    pos_ = end;
    return true;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * factor();
      } else if (accept('/')) {
        lhs = lhs / factor();
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return -factor();
    return power();
  }

  Expr power() {
    Expr b = base();
    if (accept('^')) return Expr::pow(b, rational());
    return b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
    if (accept_word("exp")) return Expr::exp(base());
    if (accept_word("log")) return Expr::log(base());
    if (accept_word("x")) return Expr::variable();
    if (accept('(')) {
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    auto digit = [&](std::size_t i) {
      return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    };
    while (digit(pos_)) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit(pos_)) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (digit(look)) {
        pos_ = look;
        while (digit(pos_)) ++pos_;
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    if (text == "." || text.empty()) {
      pos_ = start;
      fail("malformed number");
    }
    return std::stod(text);
  }

  double rational() {
    const bool paren = accept('(');
    const bool neg = accept('-');
    skip_ws();
    if (pos_ >= src_.size() ||
        !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      fail("expected rational exponent");
    }
    double num = number();
    // A bare x^2/3 divides the power by 3; fractional exponents need parentheses.
    if (paren && accept('/')) {
      skip_ws();
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        fail("expected denominator");
      }
      const std::size_t at = pos_;
      double den = number();
      if (den == 0.0) {
        pos_ = at;
        fail("zero denominator in exponent");
      }
      num /= den;
    }
    if (paren && !accept(')')) fail("expected ')'");
    return neg ? -num : num;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

}  // namespace thermoset
