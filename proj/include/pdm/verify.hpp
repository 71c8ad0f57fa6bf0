#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdm/construct.hpp"

namespace pdm {

/// Uniform grid with Dirichlet ends; the unknowns are the n_points - 2
/// interior nodes.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 3;

  void validate() const;
  double step() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + i * step(); }
  std::size_t interior() const { return static_cast<std::size_t>(n_points - 2); }
};

/// Flux-form discretization of -d/dx[(1/M) d/dx] + V: symmetric tridiagonal
/// on the interior nodes.
struct DiscreteHamiltonian {
  std::vector<double> diag;
  std::vector<double> off;
  Grid grid;
  // -1/(M h^2) at the two outer half-points; couples the first/last unknown
  // to a prescribed boundary value.
  double left_coupling = 0.0;
  double right_coupling = 0.0;

  std::size_t size() const { return diag.size(); }
  /// max_i (|d_i| + |e_{i-1}| + |e_i|), the infinity norm.
  double norm() const;
  std::vector<double> apply(std::span<const double> v, double shift = 0.0) const;
};

DiscreteHamiltonian discretize_hamiltonian(const Function& mass, const Function& potential, const Grid& grid,
                                           double m_min = 1e-12);

/// Number of eigenvalues strictly below `shift`.
std::size_t sturm_count(const DiscreteHamiltonian& H, double shift);

/// The k smallest eigenvalues, ascending (multi-shift Sturm bisection).
std::vector<double> eigen_lowest(const DiscreteHamiltonian& H, int k);

/// Unit-norm eigenvector for an eigenvalue E by inverse iteration. The sign
/// is fixed so the first entry above 1e-3 max|v| is positive.
std::vector<double> eigenvector_for(const DiscreteHamiltonian& H, double E);

struct BoundaryValues {
  double left = 0.0;
  double right = 0.0;
};

/// ||H psi - E psi||_2 / max(1, |E|) with psi scaled to unit 2-norm first.
/// Boundary values, when given, enter through the outer couplings.
double operator_residual(const DiscreteHamiltonian& H, std::span<const double> psi, double E,
                         std::optional<BoundaryValues> boundary = std::nullopt);

/// Strict sign changes, ignoring entries below 1e-12 max|psi|.
int count_nodes(std::span<const double> psi);

struct VerificationRow {
  int n = 0;
  double E_analytic = 0.0;
  double E_numeric = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  int nodes_expected = 0;
  int nodes_observed = 0;
  double residual = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  double orthogonality_defect = 0.0;
  bool passed = false;
  double tolerance = 0.0;
  Grid grid;
  std::vector<RejectedLevel> rejected;
};

/// Matches each analytic level with the numeric eigenvalue of the same node
/// count (oscillation theorem) and compares.
VerificationReport compare_spectra(const ConstructedProblem& problem, const Grid& grid, double tol);

/// Analytic psi of one level sampled on the interior nodes of `grid`.
std::vector<double> sample_interior(const Function& psi, const Grid& grid);

/// M = 1, V = x^2, E_n = 2n + 1 with Hermite wavefunctions.
ConstructedProblem harmonic_sanity_problem(int n_max);

struct CalibrationCase {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Particle in [0,1] (N = 2001, k = 1..3) and the harmonic oscillator on
/// [-10,10] (N = 4001, n = 0..3).
std::vector<CalibrationCase> calibrate(double tolerance = 1e-5);

}  // namespace pdm
