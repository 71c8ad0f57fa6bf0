#include "pdm/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pdm/error.hpp"

namespace pdm {
namespace {

double jacobi_value(int n, double a, double b, double x) {
  if (n < 0) return 0.0;
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double gegenbauer_value(int n, double a, double x) {
  if (n < 0) return 0.0;
  double c0 = 1.0;
  if (n == 0) return c0;
  double c1 = 2.0 * a * x;
  for (int k = 2; k <= n; ++k) {
    const double c2 = (2.0 * x * (k + a - 1.0) * c1 - (k + 2.0 * a - 2.0) * c0) / k;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

double laguerre_value(int n, double a, double x) {
  if (n < 0) return 0.0;
  double l0 = 1.0;
  if (n == 0) return l0;
  double l1 = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 + a - x) * l1 - (k + a) * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

void check_domain(const FamilySpec& spec, double g) {
  if (!std::isfinite(g)) fail(ErrorKind::Domain, "non-finite argument g");
  const Interval d = spec.natural_domain();
  if (!d.contains_closed(g)) {
    std::ostringstream os;
    os << "g = " << g << " outside the natural domain of " << spec.describe();
    fail(ErrorKind::Domain, os.str());
  }
}

// Prefactor s^p of the composite family and its first two derivatives.
struct Prefactor {
  double value, d1, d2;
};

Prefactor composite_prefactor(double alpha, double g) {
  const double p = (2.0 * alpha + 1.0) / 4.0;
  const double s = 1.0 - g * g;
  if (s <= 0.0) {
    if (p > 0.0) return {0.0, 0.0, 0.0};
    fail(ErrorKind::Domain, "composite prefactor singular at |g| = 1");
  }
  const double v = std::pow(s, p);
  const double d1 = -2.0 * p * g * v / s;
  const double d2 = -2.0 * p * v / s + 4.0 * p * (p - 1.0) * g * g * v / (s * s);
  return {v, d1, d2};
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Jacobi: return "jacobi";
    case FamilyKind::Gegenbauer: return "gegenbauer";
    case FamilyKind::GenLaguerre: return "laguerre";
    case FamilyKind::GegenbauerComposite: return "gegenbauer-composite";
  }
  return "unknown";
}

void FamilySpec::validate() const {
  if (degree < 0) fail(ErrorKind::Parameter, "degree n >= 0 violated");
  if (!(alpha > -1.0) || !std::isfinite(alpha))
    fail(ErrorKind::Parameter, "alpha > -1 violated (alpha = " + std::to_string(alpha) + ")");
  if (kind == FamilyKind::Jacobi && (!(beta > -1.0) || !std::isfinite(beta)))
    fail(ErrorKind::Parameter, "beta > -1 violated (beta = " + std::to_string(beta) + ")");
}

Interval FamilySpec::natural_domain() const {
  if (kind == FamilyKind::GenLaguerre) return {0.0, std::numeric_limits<double>::infinity()};
  return {-1.0, 1.0};
}

FamilySpec FamilySpec::polynomial_part() const {
  if (kind == FamilyKind::GegenbauerComposite) return gegenbauer(degree, alpha);
  return *this;
}

std::string FamilySpec::describe() const {
  std::ostringstream os;
  os << to_string(kind) << "(n=" << degree << ", alpha=" << alpha;
  if (kind == FamilyKind::Jacobi) os << ", beta=" << beta;
  os << ")";
  return os.str();
}

double eval_basis_derivative(const FamilySpec& spec, double g, int order) {
  spec.validate();
  check_domain(spec, g);
  if (order < 0) fail(ErrorKind::Parameter, "derivative order must be non-negative");
  const int n = spec.degree;
  if (order > n) return 0.0;
  const double a = spec.alpha;
  switch (spec.kind) {
    case FamilyKind::Jacobi: {
      double scale = 1.0;
      for (int j = 1; j <= order; ++j) scale *= 0.5 * (a + spec.beta + n + j);
      return scale * jacobi_value(n - order, a + order, spec.beta + order, g);
    }
    case FamilyKind::Gegenbauer:
    case FamilyKind::GegenbauerComposite: {
      double scale = 1.0;
      for (int j = 0; j < order; ++j) scale *= 2.0 * (a + j);
      return scale * gegenbauer_value(n - order, a + order, g);
    }
    case FamilyKind::GenLaguerre: {
      const double sign = (order % 2 == 0) ? 1.0 : -1.0;
      return sign * laguerre_value(n - order, a + order, g);
    }
  }
  return 0.0;
}

double eval_polynomial(const FamilySpec& spec, double g) {
  if (spec.kind != FamilyKind::GegenbauerComposite) return eval_basis_derivative(spec, g, 0);
  const double c = eval_basis_derivative(spec, g, 0);
  return composite_prefactor(spec.alpha, g).value * c;
}

double eval_polynomial_derivative(const FamilySpec& spec, double g) {
  if (spec.kind != FamilyKind::GegenbauerComposite) return eval_basis_derivative(spec, g, 1);
  const Prefactor p = composite_prefactor(spec.alpha, g);
  return p.d1 * eval_basis_derivative(spec, g, 0) + p.value * eval_basis_derivative(spec, g, 1);
}

double eval_polynomial_second_derivative(const FamilySpec& spec, double g) {
  if (spec.kind != FamilyKind::GegenbauerComposite) return eval_basis_derivative(spec, g, 2);
  const Prefactor p = composite_prefactor(spec.alpha, g);
  return p.d2 * eval_basis_derivative(spec, g, 0) + 2.0 * p.d1 * eval_basis_derivative(spec, g, 1) +
         p.value * eval_basis_derivative(spec, g, 2);
}

OdeCoefficients ode_coefficients(const FamilySpec& spec) {
  spec.validate();
  const double n = spec.degree;
  const double a = spec.alpha;
  const Polynomial one_minus_g2({1.0, 0.0, -1.0});
  switch (spec.kind) {
    case FamilyKind::Jacobi: {
      const double b = spec.beta;
      return {RationalFunction(Polynomial({b - a, -(a + b + 2.0)}), one_minus_g2),
              RationalFunction(Polynomial({n * (n + a + b + 1.0)}), one_minus_g2)};
    }
    case FamilyKind::Gegenbauer:
      return {RationalFunction(Polynomial({0.0, -(2.0 * a + 1.0)}), one_minus_g2),
              RationalFunction(Polynomial({n * (n + 2.0 * a)}), one_minus_g2)};
    case FamilyKind::GenLaguerre:
      return {RationalFunction(Polynomial({a + 1.0, -1.0}), Polynomial({0.0, 1.0})),
              RationalFunction(Polynomial({n}), Polynomial({0.0, 1.0}))};
    case FamilyKind::GegenbauerComposite: {
      // R = (n+a)^2/(1-g^2) + [2 + 4a(1-a) + g^2] / [4 (1-g^2)^2]
      const double na2 = (n + a) * (n + a);
      return {RationalFunction(0.0),
              RationalFunction(Polynomial({4.0 * na2 + 2.0 + 4.0 * a * (1.0 - a), 0.0, 1.0 - 4.0 * na2}),
                               Polynomial({4.0, 0.0, -8.0, 0.0, 4.0}))};
    }
  }
  return {};
}

double ode_residual(const FamilySpec& spec, double g) {
  spec.validate();
  check_domain(spec, g);
  const Interval d = spec.natural_domain();
  if (!d.contains(g)) fail(ErrorKind::Domain, "ode_residual requires an interior point");
  const OdeCoefficients c = ode_coefficients(spec);
  const double qden = c.Q.denominator()(g);
  const double rden = c.R.denominator()(g);
  if (qden == 0.0 || rden == 0.0) fail(ErrorKind::Domain, "singular point of Q or R");
  const double f0 = eval_polynomial(spec, g);
  const double f1 = eval_polynomial_derivative(spec, g);
  const double f2 = eval_polynomial_second_derivative(spec, g);
  return f2 + c.Q(g) * f1 + c.R(g) * f0;
}

std::vector<double> polynomial_zeros(const FamilySpec& spec) {
  spec.validate();
  const FamilySpec poly = spec.polynomial_part();
  std::vector<double> zeros;
  if (spec.degree == 0) return zeros;
  double lo = -1.0;
  double hi = 1.0;
  if (spec.kind == FamilyKind::GenLaguerre) {
    lo = 0.0;
    hi = 4.0 * spec.degree + 2.0 * std::abs(spec.alpha) + 10.0;
  }
  const int scan = 400 * (spec.degree + 1);
  const auto value = [&](double g) { return eval_basis_derivative(poly, g, 0); };
  double x0 = lo;
  double v0 = value(x0);
  for (int i = 1; i <= scan; ++i) {
    const double x1 = lo + (hi - lo) * i / scan;
    const double v1 = value(x1);
    if (v0 == 0.0 && x0 > lo) {
      zeros.push_back(x0);
    } else if (v0 * v1 < 0.0) {
      double a = x0, b = x1, va = v0;
      for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a + b); ++it) {
        const double m = 0.5 * (a + b);
        const double vm = value(m);
        if (vm == 0.0) {
          a = b = m;
          break;
        }
        if ((vm < 0.0) == (va < 0.0)) {
          a = m;
          va = vm;
        } else {
          b = m;
        }
      }
      zeros.push_back(0.5 * (a + b));
    }
    x0 = x1;
    v0 = v1;
  }
  return zeros;
}

}  // namespace pdm
