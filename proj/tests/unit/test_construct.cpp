#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "pdm/catalog.hpp"
#include "pdm/construct.hpp"
#include "pdm/error.hpp"

using namespace pdm;

namespace {

template <class Fn>
ErrorKind kind_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Numerical;
}

ConstructedProblem example1_engine(double q, double a, double b, int n_max) {
  const EngineInputs in = jacobi_pdm_engine_inputs({q, a, b, n_max});
  return assemble_problem(in.families, in.mapping, in.mass, in.options);
}

ConstructedProblem example2_engine(int n, double alpha) {
  HulthenFamilyParams p;
  p.a = -1.0;
  p.mode = FamilyMode{n, alpha};
  const EngineInputs in = gegenbauer_radial_engine_inputs(p);
  return assemble_problem(in.families, in.mapping, in.mass, in.options);
}

}  // namespace

TEST_SUITE("construct") {
  TEST_CASE("mapping branches") {
    const auto t = solve_mapping(MappingAnsatz::tanh_branch(1.0));
    CHECK(t.g(1.0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
    for (double x : {-3.0, 0.2, 2.5}) {
      const double g = t.g(x);
      CHECK(t.g_prime(x) == doctest::Approx(1 - g * g).epsilon(1e-10));
    }

    // fourth-order integration of g' = 1 - g^2 reproduces tanh
    const RationalFunction h(Polynomial(std::vector<double>{1.0, 0.0, -1.0}));
    const auto nr = solve_mapping(MappingAnsatz::numeric_rational(1.0, h, {-3.0, 3.0}), 4001);
    for (double x : {-2.5, -1.0, 0.0, 1.0, 2.9}) CHECK(std::abs(nr.g(x) - std::tanh(x)) <= 1e-10);

    const auto s = solve_mapping(MappingAnsatz::sqrt_exp_branch(1.0));
    CHECK(s.g(40.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (double x : {0.1, 1.0, 4.0}) {
      const double g = s.g(x);
      CHECK(g * s.g_prime(x) == doctest::Approx(1 - g * g).epsilon(1e-10));
      CHECK(g == doctest::Approx(std::sqrt(-std::expm1(-2 * x))).epsilon(1e-15));
    }

    const auto id = solve_mapping(MappingAnsatz::identity({-2.0, 5.0}));
    CHECK(id.g(1.25) == 1.25);
    CHECK(id.g_prime(3.0) == 1.0);
  }

  TEST_CASE("mapping failures") {
    CHECK(kind_of([] { solve_mapping(MappingAnsatz::sqrt_exp_branch(1.0, {-1.0, kInf})); }) == ErrorKind::Domain);
    const RationalFunction grow(1.0);  // g' = 1 leaves [-1, 1]
    CHECK(kind_of([&] { solve_mapping(MappingAnsatz::numeric_rational(1.0, grow, {-5.0, 5.0})); }) == ErrorKind::Range);
    CHECK(kind_of([] { MappingAnsatz::tanh_branch(0.0).validate(); }) == ErrorKind::Parameter);
  }

  TEST_CASE("modulation factor closed forms") {
    const auto id = solve_mapping(MappingAnsatz::identity({-1.0, 1.0}));
    const Function f0 = modulation_factor(RationalFunction(0.0), id, MassModel::unit());
    CHECK(f0(-0.5) == doctest::Approx(f0(0.7)).epsilon(1e-15));

    const auto s = solve_mapping(MappingAnsatz::sqrt_exp_branch(1.0));
    const Function fs = modulation_factor(RationalFunction(0.0), s, MassModel::unit());
    const auto ratio_s = [&](double x) {
      const double g = s.g(x);
      return fs(x) / std::sqrt(g / (1 - g * g));
    };
    CHECK(ratio_s(0.3) == doctest::Approx(ratio_s(2.0)).epsilon(1e-12));

    const double q = 0.8, a = 0.5, b = 1.5;
    const auto t = solve_mapping(MappingAnsatz::tanh_branch(q));
    const Function fj = modulation_factor(ode_coefficients(FamilySpec::jacobi(0, a, b)).Q, t,
                                          MassModel::proportional_to_g_prime(1 / q));
    const auto ratio_j = [&](double x) {
      const double g = std::tanh(q * x);
      return fj(x) / (std::pow(1 - g, (a + 1) / 2) * std::pow(1 + g, (b + 1) / 2));
    };
    CHECK(ratio_j(-1.7) == doctest::Approx(ratio_j(1.2)).epsilon(1e-12));
  }

  TEST_CASE("superpotential and base potential on textbook inputs") {
    const Function x = Function::x();
    const Function f = exp(Function(-0.5) * x * x);
    const Function W = superpotential(f, Function(1.0), {-5.0, 5.0});
    const Function B = base_potential(W, Function(1.0));
    for (double v : {-2.0, 0.3, 1.9}) {
      CHECK(W(v) == doctest::Approx(v).epsilon(1e-14));
      CHECK(B(v) == doctest::Approx(v * v - 1).epsilon(1e-13));
    }
    const Function We = superpotential(exp(Function(-2.5) * x), Function(1.0), {-5.0, 5.0});
    CHECK(We(0.4) == doctest::Approx(2.5).epsilon(1e-15));

    const double q = 1.3, a = 0.5, b = 1.5;
    const auto p = example1_engine(q, a, b, 0);
    for (double v : {-2.0, 0.4, 3.0}) {
      const double w = -(q / 2) * ((b + 1) * std::exp(-q * v) - (a + 1) * std::exp(q * v));
      CHECK(p.W(v) == doctest::Approx(w).epsilon(1e-12));
      const double base = (q * q / 4) * ((a * a - 1) * std::exp(2 * q * v) + (b * b - 1) * std::exp(-2 * q * v)) -
                          (q * q / 2) * (a + 1) * (b + 1);
      CHECK(p.base_minus_eps(v) == doctest::Approx(base).epsilon(1e-11));
    }
    const auto e2 = example2_engine(0, 11.5);
    for (double r : {0.3, 1.0, 2.5}) {
      const double y = std::exp(-2 * r);
      CHECK(e2.base_minus_eps(r) == doctest::Approx((y * y - 8 * y + 4) / (4 * (1 - y) * (1 - y))).epsilon(1e-12));
    }
  }

  TEST_CASE("delta terms") {
    const double q = 1.0, a = 0.5, b = 1.5;
    const auto t = solve_mapping(MappingAnsatz::tanh_branch(q));
    for (int n : {0, 1, 3}) {
      const auto d = delta_terms(ode_coefficients(FamilySpec::jacobi(n, a, b)).R, t,
                                 MassModel::proportional_to_g_prime(1 / q));
      CHECK(d.delta_E == doctest::Approx(q * q * n * (n + a + b + 1)).epsilon(1e-13));
      CHECK(d.delta_V(0.7) == 0.0);
    }

    const double alpha = 3.5;
    const int n = 1;
    const double A = (n + alpha) * (n + alpha) + alpha * (1 - alpha) + 0.5;
    const auto s = solve_mapping(MappingAnsatz::sqrt_exp_branch(1.0));
    const auto d = delta_terms(ode_coefficients(FamilySpec::gegenbauer_composite(n, alpha)).R, s, MassModel::unit());
    CHECK(d.delta_E == doctest::Approx(0.25 - (n + alpha) * (n + alpha)).epsilon(1e-13));
    for (double r : {0.4, 1.5, 3.0}) CHECK(d.delta_V(r) == doctest::Approx(-A / (-std::expm1(-2 * r))).epsilon(1e-12));
  }

  TEST_CASE("no constant part is an ansatz mismatch") {
    const auto id = solve_mapping(MappingAnsatz::identity({-0.9, 0.9}));
    CHECK(kind_of([&] { delta_terms(ode_coefficients(FamilySpec::jacobi(2, 0.0, 0.0)).R, id, MassModel::unit()); }) ==
          ErrorKind::AnsatzMismatch);
  }

  TEST_CASE("delta superpotential and node guard") {
    const auto t = solve_mapping(MappingAnsatz::tanh_branch(1.0));
    const MassModel m = MassModel::proportional_to_g_prime(1.0);
    const auto d0 = delta_superpotential(FamilySpec::jacobi(0, 0.0, 0.0), t, m);
    CHECK(d0(0.4) == 0.0);
    const auto d1 = delta_superpotential(FamilySpec::jacobi(1, 0.0, 0.0), t, m);
    REQUIRE(d1.nodes.size() == 1);
    CHECK(d1.nodes[0] == doctest::Approx(0.0).scale(1.0));
    // F = g: Delta W = -g'/(sqrt(M) g) = -sech/tanh
    CHECK(d1(1.0) == doctest::Approx(-1 / std::sinh(1.0)).epsilon(1e-13));
    CHECK(kind_of([&] { d1(0.0); }) == ErrorKind::Node);
  }

  TEST_CASE("Riccati identities") {
    const auto p = example1_engine(0.5, 0.0, 0.0, 2);
    for (std::size_t n = 0; n < 3; ++n) {
      const auto r = riccati_residuals(p, 0.7, n);
      CHECK(std::abs(r.base) <= 1e-8 * std::max(1.0, r.base_scale));
      CHECK(std::abs(r.delta) <= 1e-8 * std::max(1.0, r.delta_scale));
    }
    const auto e2 = example2_engine(1, 3.5);
    const auto r = riccati_residuals(e2, 2.0, 0);
    CHECK(std::abs(r.base) <= 1e-8 * std::max(1.0, r.base_scale));
    CHECK(std::abs(r.delta) <= 1e-8 * std::max(1.0, r.delta_scale));
  }

  TEST_CASE("Schrodinger residual of assembled levels") {
    const auto p = example1_engine(0.5, 0.0, 0.0, 3);
    for (std::size_t n = 0; n < 4; ++n) {
      for (double x : {-3.1, 0.45, 2.2}) {
        const auto r = schrodinger_residual(p, n, x);
        CHECK(std::abs(r.value) <= 1e-9 * std::max(1e-300, r.scale));
      }
    }
  }

  TEST_CASE("coefficient round trip") {
    const auto p = example1_engine(1.0, 0.5, 1.5, 3);
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(-4.0 + 8.0 * (i + 0.5) / 50);
    for (std::size_t n = 0; n < 4; ++n) {
      const auto oc = ode_coefficients(p.levels[n].family);
      const auto s = infer_ode_coefficients(p, n, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(s.Q[i] == doctest::Approx(oc.Q(s.g[i])).epsilon(1e-6).scale(1.0));
        CHECK(s.R[i] == doctest::Approx(oc.R(s.g[i])).epsilon(1e-6).scale(1.0));
      }
    }
    const auto e2 = example2_engine(2, 1.5);
    std::vector<double> rs;
    for (int i = 0; i < 50; ++i) rs.push_back(0.1 + 2.9 * i / 49.0);
    const auto s = infer_ode_coefficients(e2, 0, rs);
    const auto oc = ode_coefficients(FamilySpec::gegenbauer_composite(2, 1.5));
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(std::abs(s.Q[i]) <= 1e-6);
      CHECK(s.R[i] == doctest::Approx(oc.R(s.g[i])).epsilon(1e-6));
    }

    // identity mapping, M = 1, constant f, V = E
    ConstructedProblem flat;
    flat.mapping = solve_mapping(MappingAnsatz::identity({-1.0, 1.0}));
    flat.f = Function(2.0);
    flat.V0 = Function(0.75);
    flat.levels.resize(1);
    flat.levels[0].E = 0.75;
    const double pts[] = {-0.5, 0.25};
    const auto z = infer_ode_coefficients(flat, 0, pts);
    CHECK(z.Q[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(z.R[1] == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("assembled energies and ground-state nodes") {
    const auto p = example1_engine(1.0, 0.0, 0.0, 1);
    CHECK(p.levels[1].E == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(p.levels[0].nodes.empty());
    const auto e2 = example2_engine(0, 11.5);
    CHECK(e2.levels[0].E == doctest::Approx(-132.25).epsilon(1e-14));
    CHECK(e2.levels[0].nodes.empty());
  }

  TEST_CASE("shifting the split leaves E - V unchanged") {
    const auto p = example1_engine(1.0, 0.5, 1.5, 2);
    const auto s = shift_split(p, 3.75);
    for (std::size_t n = 0; n < 3; ++n) {
      for (double x : {-2.0, 0.0, 1.5}) {
        const double before = p.levels[n].E - p.potential(n)(x);
        const double after = s.levels[n].E - s.potential(n)(x);
        CHECK(std::abs(before - after) <= 1e-14 * std::max(1.0, std::abs(before)) * 8);
      }
    }
  }

  TEST_CASE("square integrability and normalization") {
    const auto p = example1_engine(1.0, 0.5, 1.5, 3);
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(p.levels[n].normalizable);
      CHECK(tail_beyond_window(p, n, 20.0) <= 1e-10);
      auto sq = [&](double x) {
        const double v = p.levels[n].psi(x);
        return v * v;
      };
      const double one = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(sq, p.window.lo, p.window.hi, 20, 1e-13);
      CHECK(one == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("analytic wavefunctions are orthogonal (tanh family)") {
    const auto p = example1_engine(0.5, 0.5, 1.5, 3);
    for (std::size_t n = 0; n < 4; ++n) {
      for (std::size_t m = n + 1; m < 4; ++m) {
        auto w = [&](double x) { return p.levels[n].psi(x) * p.levels[m].psi(x); };
        const double s = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(w, p.window.lo, p.window.hi, 20, 1e-12);
        CHECK(std::abs(s) <= 1e-6);
      }
    }
  }

  TEST_CASE("levels must share Q, errors carry the level") {
    const auto t = solve_mapping(MappingAnsatz::tanh_branch(1.0));
    const FamilySpec mixed[] = {FamilySpec::jacobi(0, 0.5, 0.5), FamilySpec::jacobi(1, 1.5, 0.5)};
    CHECK(kind_of([&] { assemble_problem(mixed, t, MassModel::proportional_to_g_prime(1.0)); }) == ErrorKind::Parameter);
    const auto id = solve_mapping(MappingAnsatz::identity({-0.9, 0.9}));
    const FamilySpec second_fails[] = {FamilySpec::jacobi(0, 0.0, 0.0), FamilySpec::jacobi(1, 0.0, 0.0)};
    try {
      assemble_problem(second_fails, id, MassModel::unit());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AnsatzMismatch);
      CHECK(std::string(e.what()).find("level n = 1") != std::string::npos);
    }
  }
}
