#pragma once

#include <span>
#include <vector>

namespace pdm {

/// Dense real polynomial, coefficients in ascending degree.
///
/// The coefficient vector keeps its *nominal* length through arithmetic:
/// products of polynomials with nominal degrees p and q have nominal degree
/// p+q even if some coefficients happen to be zero for the chosen parameter
/// values. Structural questions ("does this expression have a polynomial
/// part?") are answered from nominal degrees, numerical ones from degree().
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(double constant) : coeffs_{constant} {}  // NOLINT(implicit)

  static Polynomial monomial(int power, double coefficient = 1.0);

  double operator()(double g) const;

  std::span<const double> coefficients() const { return coeffs_; }
  double coefficient(int power) const;

  /// Length of the coefficient vector minus one (0 for the empty/zero case).
  int nominal_degree() const;
  /// Index of the highest nonzero coefficient, -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  double leading() const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  /// Drop trailing zero coefficients.
  Polynomial trimmed() const;
  /// Zero coefficients whose magnitude is below rel * max|c|.
  Polynomial chopped(double rel) const;

  struct DivMod;
  /// Long division by a divisor with nonzero leading coefficient. The
  /// quotient has nominal degree max(0, nominal_degree() - divisor.degree()).
  DivMod divmod(const Polynomial& divisor) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double scale);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<double> coeffs_;
};

struct Polynomial::DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

/// numerator(g) / denominator(g), both held as Polynomial.
class RationalFunction {
 public:
  RationalFunction() : num_(0.0), den_(1.0) {}
  RationalFunction(Polynomial numerator, Polynomial denominator);
  RationalFunction(const Polynomial& p) : num_(p), den_(1.0) {}  // NOLINT
  RationalFunction(double c) : num_(c), den_(1.0) {}             // NOLINT

  double operator()(double g) const;

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  RationalFunction derivative() const;
  RationalFunction reciprocal() const;
  bool is_zero() const { return num_.is_zero(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a);

 private:
  Polynomial num_;
  Polynomial den_;
};

}  // namespace pdm

namespace pdm {

/// Roots of p (trimmed), via the companion-matrix eigenvalues. Roots within
/// 1e-6 of an integer or half-integer are snapped onto it, which makes the
/// repeated roots of factors such as (1-g^2)^2 exact.
struct PolynomialRoot {
  double re;
  double im;
};
std::vector<PolynomialRoot> roots(const Polynomial& p);

/// p(g) / (g - r) by synthetic division; the remainder p(r) is returned
/// through `remainder`.
Polynomial deflate(const Polynomial& p, double r, double* remainder = nullptr);

/// Cancels real linear factors shared by numerator and denominator.
RationalFunction reduced(const RationalFunction& r);

}  // namespace pdm
