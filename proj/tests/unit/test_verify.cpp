#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "pdm/catalog.hpp"
#include "pdm/error.hpp"
#include "pdm/verify.hpp"

using namespace pdm;

namespace {

Eigen::VectorXd dense_eigenvalues(const DiscreteHamiltonian& H) {
  const auto n = static_cast<Eigen::Index>(H.size());
  Eigen::VectorXd d(n), e(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = H.diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = H.off[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

DiscreteHamiltonian anharmonic(int n_points) {
  const Function x = Function::x();
  const Function mass = Function(1.0) + Function(0.3) * x * x;  // smooth, positive
  const Function V = x * x + Function(0.1) * x * x * x * x;
  return discretize_hamiltonian(mass, V, Grid{-6.0, 6.0, n_points});
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("free operator is the scaled second difference") {
    const Grid g{0.0, 1.0, 11};
    const auto H = discretize_hamiltonian(Function(1.0), Function(0.0), g);
    const double h2 = g.step() * g.step();
    for (double d : H.diag) CHECK(d == doctest::Approx(2 / h2).epsilon(1e-14));
    for (double e : H.off) CHECK(e == doctest::Approx(-1 / h2).epsilon(1e-14));
  }

  TEST_CASE("Sturm bisection against a dense eigensolver") {
    const auto H = anharmonic(801);
    const auto dense = dense_eigenvalues(H);
    const auto ours = eigen_lowest(H, 8);
    for (int k = 0; k < 8; ++k) CHECK(ours[k] == doctest::Approx(dense[k]).epsilon(1e-12));
    for (double shift : {-1.0, 2.0, 7.5, 30.0}) {
      std::size_t below = 0;
      for (Eigen::Index k = 0; k < dense.size(); ++k) below += dense[k] < shift;
      CHECK(sturm_count(H, shift) == below);
    }
  }

  TEST_CASE("eigenvectors: residual, sign, orthogonality, nodes") {
    const auto H = anharmonic(1201);
    const auto E = eigen_lowest(H, 5);
    std::vector<std::vector<double>> v;
    for (int k = 0; k < 5; ++k) {
      v.push_back(eigenvector_for(H, E[k]));
      CHECK(operator_residual(H, v.back(), E[k]) <= 1e-8 * std::max(1.0, H.norm()));
      CHECK(count_nodes(v.back()) == k);
    }
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < v[i].size(); ++k) s += v[i][k] * v[j][k];
        CHECK(std::abs(s) <= 1e-8);
      }
    }
  }

  TEST_CASE("second-order convergence on the oscillator") {
    const Function x = Function::x();
    double err[3];
    const int Ns[3] = {501, 1001, 2001};
    for (int i = 0; i < 3; ++i) {
      const auto H = discretize_hamiltonian(Function(1.0), x * x, Grid{-10.0, 10.0, Ns[i]});
      err[i] = std::abs(eigen_lowest(H, 3)[2] - 5.0);
    }
    const double order = std::log2(err[0] / err[1]) * 0.5 + std::log2(err[1] / err[2]) * 0.5;
    CHECK(order == doctest::Approx(2.0).epsilon(0.15));
  }

  TEST_CASE("report on the oscillator and a corrupted level") {
    const auto p = harmonic_sanity_problem(3);
    const auto ok = compare_spectra(p, Grid{-10.0, 10.0, 4001}, 1e-4);
    CHECK(ok.passed);
    CHECK(ok.orthogonality_defect <= 1e-6);
    for (const auto& r : ok.rows) CHECK(r.nodes_observed == r.n);

    auto bad = p;
    bad.levels[0].E *= 1.1;
    const auto rep = compare_spectra(bad, Grid{-10.0, 10.0, 4001}, 1e-4);
    CHECK_FALSE(rep.passed);
    int failing = 0;
    for (const auto& r : rep.rows) failing += !r.passed;
    CHECK(failing == 1);
  }

  TEST_CASE("degenerate mass is reported") {
    const Function x = Function::x();
    try {
      discretize_hamiltonian(x * x, Function(0.0), Grid{-1.0, 1.0, 12});  // a half-point lands on x = 0
      FAIL("expected mass-degeneracy");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MassDegeneracy);
    }
  }

  TEST_CASE("grid invariants") {
    try {
      Grid{1.0, 0.0, 10}.validate();
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parameter);
    }
  }

  TEST_CASE("calibration suite") {
    const auto cases = calibrate();
    CHECK(cases.size() == 7);
    for (const auto& c : cases) CHECK_MESSAGE(c.passed, c.name);
  }

  TEST_CASE("tanh family: analytic levels satisfy the discrete equation") {
    const auto p = jacobi_pdm({1.0, 0.5, 1.5, 3});
    const Interval w = p.window;
    const Grid g{w.lo, w.hi, static_cast<int>(std::llround(w.width() / 1e-3)) + 1};
    for (std::size_t n = 0; n < 4; ++n) {
      const auto H = discretize_hamiltonian(p.mass, p.potential(n), g);
      const auto s = sample_interior(p.levels[n].psi, g);
      const double r = operator_residual(H, s, p.levels[n].E, BoundaryValues{p.levels[n].psi(w.lo), p.levels[n].psi(w.hi)});
      CHECK(r <= 1e-4);
    }
  }
}
