#include "pdm/expr.hpp"

#include <cmath>

#include "pdm/error.hpp"

namespace pdm {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;  // constant value or power exponent
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::shared_ptr<const RationalFunction> rational;
  FamilySpec family{};
  int order = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = value;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Expr::Op::Constant && n->value == v; }

double eval(const Expr::Node& n, double x) {
  switch (n.op) {
    case Expr::Op::Constant: return n.value;
    case Expr::Op::Variable: return x;
    case Expr::Op::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Expr::Op::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Expr::Op::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Expr::Op::Pow: {
      const double b = eval(*n.lhs, x);
      if (n.value == 0.5) return std::sqrt(b);
      if (n.value == 2.0) return b * b;
      if (n.value == -1.0) return 1.0 / b;
      return std::pow(b, n.value);
    }
    case Expr::Op::Exp: return std::exp(eval(*n.lhs, x));
    case Expr::Op::Log: return std::log(eval(*n.lhs, x));
    case Expr::Op::Tanh: return std::tanh(eval(*n.lhs, x));
    case Expr::Op::Sech: return 1.0 / std::cosh(eval(*n.lhs, x));
    case Expr::Op::Rational: return (*n.rational)(eval(*n.lhs, x));
    case Expr::Op::Family: return eval_basis_derivative(n.family, eval(*n.lhs, x), n.order);
  }
  return 0.0;
}

std::size_t count(const Expr::Node& n) {
  std::size_t s = 1;
  if (n.lhs) s += count(*n.lhs);
  if (n.rhs) s += count(*n.rhs);
  return s;
}

}  // namespace

Expr::Expr(double constant) : node_(make(Op::Constant, nullptr, nullptr, constant)) {}

Expr Expr::variable() { return Expr(make(Op::Variable)); }

double Expr::operator()(double x) const { return eval(*node_, x); }

Expr::Op Expr::op() const { return node_->op; }

double Expr::constant_value() const {
  if (!is_constant()) fail(ErrorKind::Numerical, "constant_value() on a non-constant expression");
  return node_->value;
}

std::size_t Expr::size() const { return count(*node_); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.node_->value + b.node_->value);
  if (is_const(a.node_, 0.0)) return b;
  if (is_const(b.node_, 0.0)) return a;
  return Expr(make(Expr::Op::Add, a.node_, b.node_));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.node_->value * b.node_->value);
  if (is_const(a.node_, 0.0) || is_const(b.node_, 0.0)) return Expr(0.0);
  if (is_const(a.node_, 1.0)) return b;
  if (is_const(b.node_, 1.0)) return a;
  // Keep constants on the left and fold c1 * (c2 * e).
  if (b.is_constant()) return b * a;
  if (a.is_constant() && b.node_->op == Expr::Op::Mul && b.node_->lhs->op == Expr::Op::Constant)
    return Expr(a.node_->value * b.node_->lhs->value) * Expr(b.node_->rhs);
  return Expr(make(Expr::Op::Mul, a.node_, b.node_));
}

Expr operator-(const Expr& a) { return Expr(-1.0) * a; }

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator/(const Expr& a, const Expr& b) {
  if (is_const(b.node_, 1.0)) return a;
  if (is_const(a.node_, 0.0)) return Expr(0.0);
  if (a.is_constant() && b.is_constant()) return Expr(a.node_->value / b.node_->value);
  if (b.is_constant()) return Expr(1.0 / b.node_->value) * a;
  return Expr(make(Expr::Op::Div, a.node_, b.node_));
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) return Expr(std::pow(base.node_->value, exponent));
  if (base.node_->op == Expr::Op::Pow && exponent == std::floor(exponent))
    return pow(Expr(base.node_->lhs), base.node_->value * exponent);
  return Expr(make(Expr::Op::Pow, base.node_, nullptr, exponent));
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr(std::exp(a.node_->value));
  return Expr(make(Expr::Op::Exp, a.node_));
}

Expr log(const Expr& a) {
  if (a.is_constant()) return Expr(std::log(a.node_->value));
  return Expr(make(Expr::Op::Log, a.node_));
}

Expr tanh(const Expr& a) {
  if (a.is_constant()) return Expr(std::tanh(a.node_->value));
  return Expr(make(Expr::Op::Tanh, a.node_));
}

Expr sech(const Expr& a) {
  if (a.is_constant()) return Expr(1.0 / std::cosh(a.node_->value));
  return Expr(make(Expr::Op::Sech, a.node_));
}

Expr apply(const RationalFunction& r, const Expr& inner) {
  if (r.numerator().is_zero()) return Expr(0.0);
  if (r.numerator().degree() <= 0 && r.denominator().degree() <= 0)
    return Expr(r.numerator().coefficient(0) / r.denominator().coefficient(0));
  if (inner.is_constant()) return Expr(r(inner.node_->value));
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Rational;
  n->lhs = inner.node_;
  n->rational = std::make_shared<const RationalFunction>(r);
  return Expr(std::move(n));
}

Expr family_basis(const FamilySpec& spec, int order, const Expr& inner) {
  const FamilySpec poly = spec.polynomial_part();
  poly.validate();
  if (order > poly.degree) return Expr(0.0);
  if (inner.is_constant()) return Expr(eval_basis_derivative(poly, inner.node_->value, order));
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Family;
  n->lhs = inner.node_;
  n->family = poly;
  n->order = order;
  return Expr(std::move(n));
}

Expr Expr::derivative() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Constant: return Expr(0.0);
    case Op::Variable: return Expr(1.0);
    case Op::Add: return Expr(n.lhs).derivative() + Expr(n.rhs).derivative();
    case Op::Mul: {
      const Expr a(n.lhs), b(n.rhs);
      return a.derivative() * b + a * b.derivative();
    }
    case Op::Div: {
      const Expr a(n.lhs), b(n.rhs);
      return (a.derivative() * b - a * b.derivative()) / pow(b, 2.0);
    }
    case Op::Pow: {
      const Expr a(n.lhs);
      return Expr(n.value) * pow(a, n.value - 1.0) * a.derivative();
    }
    case Op::Exp: return *this * Expr(n.lhs).derivative();
    case Op::Log: return Expr(n.lhs).derivative() / Expr(n.lhs);
    case Op::Tanh: return pow(sech(Expr(n.lhs)), 2.0) * Expr(n.lhs).derivative();
    case Op::Sech: {
      const Expr a(n.lhs);
      return -(*this * tanh(a) * a.derivative());
    }
    case Op::Rational: {
      const Expr a(n.lhs);
      return apply(n.rational->derivative(), a) * a.derivative();
    }
    case Op::Family: {
      const Expr a(n.lhs);
      return family_basis(n.family, n.order + 1, a) * a.derivative();
    }
  }
  return Expr(0.0);
}

}  // namespace pdm
