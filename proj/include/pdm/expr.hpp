#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>

#include "pdm/polynomial.hpp"
#include "pdm/specfun.hpp"

namespace pdm {

/// Immutable closed-form expression in one variable x.
///
/// The vocabulary is deliberately small: arithmetic, real powers, exp, log,
/// tanh, sech, rational functions of a sub-expression, and k-th derivatives
/// of an orthogonal polynomial of a sub-expression. Every node knows its own
/// derivative, so derivative() is exact symbolic differentiation. Nodes are
/// shared between trees and never mutated.
class Expr {
 public:
  enum class Op : std::uint8_t {
    Constant,
    Variable,
    Add,
    Mul,
    Div,
    Pow,
    Exp,
    Log,
    Tanh,
    Sech,
    Rational,
    Family,
  };

  Expr(double constant);  // NOLINT(implicit)
  static Expr variable();

  double operator()(double x) const;
  Expr derivative() const;

  Op op() const;
  bool is_constant() const { return op() == Op::Constant; }
  /// Valid only when is_constant().
  double constant_value() const;
  /// Number of nodes reachable from this root (shared nodes counted once per use).
  std::size_t size() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend Expr pow(const Expr& base, double exponent);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr tanh(const Expr& a);
  friend Expr sech(const Expr& a);
  friend Expr apply(const RationalFunction& r, const Expr& inner);
  friend Expr family_basis(const FamilySpec& spec, int order, const Expr& inner);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& base, double exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr tanh(const Expr& a);
Expr sech(const Expr& a);
inline Expr sqrt(const Expr& a) { return pow(a, 0.5); }
Expr apply(const RationalFunction& r, const Expr& inner);
/// d^order/dg^order of the bare polynomial of `spec`, evaluated at g = inner(x).
Expr family_basis(const FamilySpec& spec, int order, const Expr& inner);

}  // namespace pdm
