#pragma once

#include <span>
#include <variant>
#include <vector>

#include "pdm/expr.hpp"
#include "pdm/interval.hpp"

namespace pdm {

/// Values on a uniform grid x_i = x0 + i*h with a not-a-knot cubic spline
/// interpolant between them.
class SampledFunction {
 public:
  SampledFunction(double x0, double h, std::vector<double> values);

  double operator()(double x) const;
  /// Fourth-order finite differences of the samples (one-sided at the ends),
  /// re-splined on the same grid.
  SampledFunction derivative() const;

  double x0() const { return x0_; }
  double step() const { return h_; }
  std::size_t size() const { return y_.size(); }
  double x_at(std::size_t i) const { return x0_ + static_cast<double>(i) * h_; }
  double x_max() const { return x_at(y_.size() - 1); }
  std::span<const double> values() const { return y_; }
  bool same_grid(const SampledFunction& other) const;

 private:
  double x0_;
  double h_;
  std::vector<double> y_;
  std::vector<double> m_;  // spline second derivatives at the nodes
};

/// Tagged function representation: a closed-form Expr or a SampledFunction.
/// Arithmetic between two closed forms stays closed; anything involving a
/// sampled operand is evaluated on that operand's grid.
class Function {
 public:
  Function(double constant) : rep_(Expr(constant)) {}  // NOLINT(implicit)
  Function(Expr e) : rep_(std::move(e)) {}             // NOLINT(implicit)
  Function(SampledFunction s) : rep_(std::move(s)) {}  // NOLINT(implicit)

  static Function x() { return Function(Expr::variable()); }

  double operator()(double x) const;
  Function derivative() const;

  bool is_closed_form() const { return std::holds_alternative<Expr>(rep_); }
  const Expr* closed_form() const { return std::get_if<Expr>(&rep_); }
  const SampledFunction* sampled() const { return std::get_if<SampledFunction>(&rep_); }

  friend Function operator+(const Function& a, const Function& b);
  friend Function operator-(const Function& a, const Function& b);
  friend Function operator*(const Function& a, const Function& b);
  friend Function operator/(const Function& a, const Function& b);
  friend Function operator-(const Function& a);

 private:
  std::variant<Expr, SampledFunction> rep_;
};

Function pow(const Function& a, double exponent);
Function sqrt(const Function& a);
Function exp(const Function& a);
Function log(const Function& a);
/// r(g(x)).
Function compose(const RationalFunction& r, const Function& g);
/// k-th derivative of the bare polynomial of `spec` at g(x).
Function compose_family(const FamilySpec& spec, int order, const Function& g);
/// F_n(g(x)) including the composite prefactor where the family has one.
Function family_function(const FamilySpec& spec, const Function& g);

/// Samples f at `count` points spread uniformly over the *open* interval.
std::vector<double> sample_open(const Function& f, Interval window, int count);

/// Zeros of f strictly inside `window`, located by scanning `scan` open
/// points for sign changes and bisecting.
std::vector<double> find_zeros(const Function& f, Interval window, int scan = 4000);

}  // namespace pdm
