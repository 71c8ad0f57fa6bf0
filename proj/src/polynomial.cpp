#include "pdm/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "pdm/error.hpp"

namespace pdm {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {}

Polynomial Polynomial::monomial(int power, double coefficient) {
  std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
  c.back() = coefficient;
  return Polynomial(std::move(c));
}

double Polynomial::operator()(double g) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * g + *it;
  return acc;
}

double Polynomial::coefficient(int power) const {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(power)];
}

int Polynomial::nominal_degree() const {
  return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

int Polynomial::degree() const {
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
    if (coeffs_[static_cast<std::size_t>(i)] != 0.0) return i;
  return -1;
}

double Polynomial::leading() const {
  const int d = degree();
  return d < 0 ? 0.0 : coeffs_[static_cast<std::size_t>(d)];
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial(std::vector<double>{0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> a(coeffs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(a));
}

Polynomial Polynomial::trimmed() const {
  const int d = degree();
  if (d < 0) return Polynomial(std::vector<double>{0.0});
  return Polynomial(std::vector<double>(coeffs_.begin(), coeffs_.begin() + d + 1));
}

Polynomial Polynomial::chopped(double rel) const {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  std::vector<double> out = coeffs_;
  for (double& c : out)
    if (std::abs(c) <= rel * scale) c = 0.0;
  return Polynomial(std::move(out));
}

Polynomial::DivMod Polynomial::divmod(const Polynomial& divisor) const {
  const int dd = divisor.degree();
  if (dd < 0) fail(ErrorKind::Domain, "polynomial division by zero");
  const int nd = nominal_degree();
  std::vector<double> rem = coeffs_;
  if (rem.empty()) rem.push_back(0.0);
  const int qd = std::max(0, nd - dd);
  std::vector<double> quot(static_cast<std::size_t>(qd) + 1, 0.0);
  const double lead = divisor.coefficient(dd);
  for (int k = nd - dd; k >= 0; --k) {
    const double factor = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = factor;
    for (int j = 0; j <= dd; ++j)
      rem[static_cast<std::size_t>(k + j)] -= factor * divisor.coefficient(j);
    rem[static_cast<std::size_t>(k + dd)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(std::max(dd, 1)));
  if (dd == 0) rem.assign(1, 0.0);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return Polynomial(0.0);
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) fail(ErrorKind::Domain, "rational function with zero denominator");
}

double RationalFunction::operator()(double g) const { return num_(g) / den_(g); }

RationalFunction RationalFunction::derivative() const {
  return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
}

RationalFunction RationalFunction::reciprocal() const {
  if (num_.is_zero()) fail(ErrorKind::Domain, "reciprocal of the zero rational function");
  return {den_, num_};
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  return a * b.reciprocal();
}

RationalFunction operator-(const RationalFunction& a) { return {-a.num_, a.den_}; }

}  // namespace pdm

#include <complex>
#include <unsupported/Eigen/Polynomials>

namespace pdm {

namespace {

double snap(double v) {
  const double twice = std::round(2.0 * v);
  if (std::abs(2.0 * v - twice) < 2e-6) return twice / 2.0;
  return v;
}

double abs_scale(const Polynomial& p, double r) {
  double s = 0.0, rp = 1.0;
  for (double c : p.coefficients()) {
    s += std::abs(c) * rp;
    rp *= std::abs(r);
  }
  return s;
}

}  // namespace

std::vector<PolynomialRoot> roots(const Polynomial& p) {
  const Polynomial t = p.trimmed();
  const int d = t.degree();
  std::vector<PolynomialRoot> out;
  if (d <= 0) return out;
  if (d == 1) {
    out.push_back({snap(-t.coefficient(0) / t.coefficient(1)), 0.0});
    return out;
  }
  Eigen::VectorXd c(d + 1);
  for (int i = 0; i <= d; ++i) c[i] = t.coefficient(i);
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(c);
  for (const std::complex<double>& z : solver.roots()) {
    PolynomialRoot r{z.real(), z.imag()};
    if (std::abs(r.im) < 1e-7 * std::max(1.0, std::abs(r.re))) {
      r.im = 0.0;
      r.re = snap(r.re);
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const PolynomialRoot& a, const PolynomialRoot& b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  });
  return out;
}

Polynomial deflate(const Polynomial& p, double r, double* remainder) {
  const auto c = p.coefficients();
  if (c.size() <= 1) {
    if (remainder != nullptr) *remainder = c.empty() ? 0.0 : c[0];
    return Polynomial(std::vector<double>{0.0});
  }
  std::vector<double> q(c.size() - 1);
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) {
    acc = acc * r + c[i];
    q[i - 1] = acc;
  }
  if (remainder != nullptr) *remainder = acc * r + c[0];
  return Polynomial(std::move(q));
}

RationalFunction reduced(const RationalFunction& r) {
  Polynomial num = r.numerator();
  Polynomial den = r.denominator();
  if (num.is_zero()) return RationalFunction(num, Polynomial(1.0));
  bool changed = true;
  while (changed && den.degree() > 0 && num.degree() > 0) {
    changed = false;
    for (const PolynomialRoot& root : roots(den)) {
      if (root.im != 0.0) continue;
      const double tol = 1e-11;
      if (std::abs(num(root.re)) > tol * abs_scale(num, root.re)) continue;
      if (std::abs(den(root.re)) > tol * abs_scale(den, root.re)) continue;
      num = deflate(num, root.re);
      den = deflate(den, root.re);
      changed = true;
      break;
    }
  }
  return RationalFunction(num, den);
}

}  // namespace pdm
