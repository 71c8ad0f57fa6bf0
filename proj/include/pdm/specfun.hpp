#pragma once

#include <string>
#include <vector>

#include "pdm/interval.hpp"
#include "pdm/polynomial.hpp"

namespace pdm {

enum class FamilyKind { Jacobi, Gegenbauer, GenLaguerre, GegenbauerComposite };

/// A special-function seed F_n(g) of the second-order ODE
///   F'' + Q(g) F' + R(g) F = 0.
///
/// GegenbauerComposite is (1-g^2)^((2 alpha + 1)/4) C_n^alpha(g), the
/// first-derivative-free normal form of the Gegenbauer equation.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Jacobi;
  double alpha = 0.0;
  double beta = 0.0;  // Jacobi only
  int degree = 0;

  static FamilySpec jacobi(int n, double alpha, double beta) { return {FamilyKind::Jacobi, alpha, beta, n}; }
  static FamilySpec gegenbauer(int n, double alpha) { return {FamilyKind::Gegenbauer, alpha, 0.0, n}; }
  static FamilySpec gen_laguerre(int n, double alpha) { return {FamilyKind::GenLaguerre, alpha, 0.0, n}; }
  static FamilySpec gegenbauer_composite(int n, double alpha) {
    return {FamilyKind::GegenbauerComposite, alpha, 0.0, n};
  }

  /// Throws parameter-error unless alpha > -1, beta > -1 (Jacobi) and n >= 0.
  void validate() const;
  /// Closed natural domain of g: [-1, 1] or [0, inf).
  Interval natural_domain() const;
  /// The family whose polynomial part is differentiated (composite -> Gegenbauer).
  FamilySpec polynomial_part() const;
  std::string describe() const;
};

std::string to_string(FamilyKind kind);

struct OdeCoefficients {
  RationalFunction Q;
  RationalFunction R;
};

double eval_polynomial(const FamilySpec& spec, double g);
double eval_polynomial_derivative(const FamilySpec& spec, double g);
double eval_polynomial_second_derivative(const FamilySpec& spec, double g);

/// k-th derivative of the bare orthogonal polynomial (for the composite
/// family: of C_n^alpha, without the prefactor). Uses the closed
/// derivative-shift identities, each evaluated by a three-term recurrence.
double eval_basis_derivative(const FamilySpec& spec, double g, int order);

OdeCoefficients ode_coefficients(const FamilySpec& spec);

/// F'' + Q F' + R F at an interior, nonsingular g.
double ode_residual(const FamilySpec& spec, double g);

/// Zeros of F_n strictly inside the natural domain, ascending.
std::vector<double> polynomial_zeros(const FamilySpec& spec);

}  // namespace pdm
