#include "pdm/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdm/error.hpp"

namespace pdm {

SampledFunction::SampledFunction(double x0, double h, std::vector<double> values)
    : x0_(x0), h_(h), y_(std::move(values)) {
  const std::size_t n = y_.size();
  if (n < 2) fail(ErrorKind::Parameter, "sampled function needs at least two samples");
  if (!(h_ > 0.0)) fail(ErrorKind::Parameter, "sampled function needs a positive step");
  m_.assign(n, 0.0);
  if (n == 3) {
    const double c = (y_[2] - 2.0 * y_[1] + y_[0]) / (h_ * h_);
    m_.assign(3, c);
    return;
  }
  if (n < 4) return;
  // Not-a-knot on a uniform grid turns the first and last interior rows into
  // 6 M_1 = rhs_1 and 6 M_{n-2} = rhs_{n-2}; the rest is the usual 1-4-1 system.
  const std::size_t k = n - 2;
  std::vector<double> rhs(k), diag(k, 4.0), lower(k, 1.0), upper(k, 1.0);
  for (std::size_t i = 0; i < k; ++i)
    rhs[i] = 6.0 * (y_[i + 2] - 2.0 * y_[i + 1] + y_[i]) / (h_ * h_);
  diag.front() = 6.0;
  upper.front() = 0.0;
  diag.back() = 6.0;
  lower.back() = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> sol(k);
  sol[k - 1] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
  for (std::size_t i = 0; i < k; ++i) m_[i + 1] = sol[i];
  m_[0] = 2.0 * m_[1] - m_[2];
  m_[n - 1] = 2.0 * m_[n - 2] - m_[n - 3];
}

double SampledFunction::operator()(double x) const {
  const double span = h_ * static_cast<double>(y_.size() - 1);
  const double t = x - x0_;
  if (!(t >= -1e-9 * h_ && t <= span + 1e-9 * h_))
    fail(ErrorKind::Range, "sampled function evaluated outside its grid");
  const std::size_t last = y_.size() - 2;
  auto i = static_cast<std::size_t>(std::clamp(std::floor(t / h_), 0.0, static_cast<double>(last)));
  const double a = t - static_cast<double>(i) * h_;  // x - x_i
  const double b = h_ - a;                           // x_{i+1} - x
  return m_[i] * b * b * b / (6.0 * h_) + m_[i + 1] * a * a * a / (6.0 * h_) +
         (y_[i] / h_ - m_[i] * h_ / 6.0) * b + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0) * a;
}

SampledFunction SampledFunction::derivative() const {
  const std::size_t n = y_.size();
  std::vector<double> d(n);
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = x_at(i);
      const double e = 1e-6 * h_;
      const double lo = std::max(x0_, x - e), hi = std::min(x_max(), x + e);
      d[i] = ((*this)(hi) - (*this)(lo)) / (hi - lo);
    }
    return SampledFunction(x0_, h_, std::move(d));
  }
  const double s = 12.0 * h_;
  const auto& y = y_;
  d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / s;
  d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / s;
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / s;
  d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) / s;
  d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) / s;
  return SampledFunction(x0_, h_, std::move(d));
}

bool SampledFunction::same_grid(const SampledFunction& other) const {
  return x0_ == other.x0_ && h_ == other.h_ && y_.size() == other.y_.size();
}

namespace {

template <class Op>
SampledFunction sample_unary(const SampledFunction& s, Op op) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (double& y : v) y = op(y);
  return SampledFunction(s.x0(), s.step(), std::move(v));
}

std::vector<double> values_on(const Function& f, const SampledFunction& grid) {
  if (const auto* s = f.sampled()) {
    if (!s->same_grid(grid)) fail(ErrorKind::Numerical, "sampled operands live on different grids");
    return {s->values().begin(), s->values().end()};
  }
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x_at(i));
  return v;
}

template <class ExprOp, class ScalarOp>
Function binary(const Function& a, const Function& b, ExprOp eop, ScalarOp sop) {
  if (a.is_closed_form() && b.is_closed_form()) return Function(eop(*a.closed_form(), *b.closed_form()));
  const SampledFunction& grid = a.sampled() ? *a.sampled() : *b.sampled();
  const std::vector<double> va = values_on(a, grid);
  const std::vector<double> vb = values_on(b, grid);
  std::vector<double> out(va.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sop(va[i], vb[i]);
  return Function(SampledFunction(grid.x0(), grid.step(), std::move(out)));
}

template <class ExprOp, class ScalarOp>
Function unary(const Function& a, ExprOp eop, ScalarOp sop) {
  if (const auto* e = a.closed_form()) return Function(eop(*e));
  return Function(sample_unary(*a.sampled(), sop));
}

}  // namespace

double Function::operator()(double x) const {
  return std::visit([x](const auto& f) { return f(x); }, rep_);
}

Function Function::derivative() const {
  return std::visit([](const auto& f) { return Function(f.derivative()); }, rep_);
}

Function operator+(const Function& a, const Function& b) {
  return binary(a, b, [](const Expr& x, const Expr& y) { return x + y; }, [](double x, double y) { return x + y; });
}
Function operator-(const Function& a, const Function& b) {
  return binary(a, b, [](const Expr& x, const Expr& y) { return x - y; }, [](double x, double y) { return x - y; });
}
Function operator*(const Function& a, const Function& b) {
  return binary(a, b, [](const Expr& x, const Expr& y) { return x * y; }, [](double x, double y) { return x * y; });
}
Function operator/(const Function& a, const Function& b) {
  return binary(a, b, [](const Expr& x, const Expr& y) { return x / y; }, [](double x, double y) { return x / y; });
}
Function operator-(const Function& a) {
  return unary(a, [](const Expr& x) { return -x; }, [](double x) { return -x; });
}

Function pow(const Function& a, double exponent) {
  return unary(a, [exponent](const Expr& x) { return pow(x, exponent); },
               [exponent](double x) { return std::pow(x, exponent); });
}
Function sqrt(const Function& a) { return pow(a, 0.5); }
Function exp(const Function& a) {
  return unary(a, [](const Expr& x) { return exp(x); }, [](double x) { return std::exp(x); });
}
Function log(const Function& a) {
  return unary(a, [](const Expr& x) { return log(x); }, [](double x) { return std::log(x); });
}

Function compose(const RationalFunction& r, const Function& g) {
  return unary(g, [&r](const Expr& x) { return apply(r, x); }, [&r](double x) { return r(x); });
}

Function compose_family(const FamilySpec& spec, int order, const Function& g) {
  const FamilySpec poly = spec.polynomial_part();
  return unary(g, [&](const Expr& x) { return family_basis(poly, order, x); },
               [&](double x) { return eval_basis_derivative(poly, x, order); });
}

Function family_function(const FamilySpec& spec, const Function& g) {
  spec.validate();
  const Function base = compose_family(spec, 0, g);
  if (spec.kind != FamilyKind::GegenbauerComposite) return base;
  const double p = (2.0 * spec.alpha + 1.0) / 4.0;
  return pow(Function(1.0) - g * g, p) * base;
}

std::vector<double> sample_open(const Function& f, Interval window, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(window.lo + window.width() * (i + 0.5) / count);
  return out;
}

std::vector<double> find_zeros(const Function& f, Interval window, int scan) {
  if (!window.finite()) fail(ErrorKind::Domain, "zero search needs a finite window");
  std::vector<double> zeros;
  const auto at = [&](int i) { return window.lo + window.width() * (i + 0.5) / scan; };
  double x0 = at(0);
  double v0 = f(x0);
  if (v0 == 0.0) zeros.push_back(x0);
  for (int i = 1; i < scan; ++i) {
    const double x1 = at(i);
    const double v1 = f(x1);
    if (v1 == 0.0) {
      zeros.push_back(x1);
    } else if (v0 != 0.0 && (v0 < 0.0) != (v1 < 0.0)) {
      double a = x0, b = x1, va = v0;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double vm = f(m);
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
