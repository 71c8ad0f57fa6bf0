#include "pdm/constant_mass.hpp"

#include <cmath>

#include "pdm/error.hpp"

namespace pdm::constant_mass {

Function modulation_factor(const RationalFunction& Q, const MappingSolution& mapping) {
  const double orient = mapping.g_prime(mapping.window.mid()) < 0.0 ? -1.0 : 1.0;
  const RationalFunction inv = reduced(orient * mapping.g_prime_of_g.reciprocal());
  Function f = sqrt(compose_factored(inv, mapping));
  if (Q.is_zero()) return f;

  // exp((1/2) Int Q dg) by partial fractions over simple real poles.
  const RationalFunction Qr = reduced(Q);
  const Polynomial& D = Qr.denominator();
  const auto [P, rem] = Qr.numerator().divmod(D);
  const Polynomial half = 0.5 * P.antiderivative();
  if (!half.trimmed().is_zero()) f = f * exp(compose(RationalFunction(half), mapping.g));
  const Polynomial dD = D.derivative();
  for (const PolynomialRoot& r : roots(D.trimmed())) {
    if (r.im != 0.0 || dD(r.re) == 0.0) {
      fail(ErrorKind::Singularity, "constant-mass path handles simple real poles of Q only");
    }
    const double sign = r.re <= mapping.g_range.lo ? 1.0 : -1.0;
    if (r.re > mapping.g_range.lo && r.re < mapping.g_range.hi) {
      fail(ErrorKind::Singularity, "Q has a pole inside the g-range");
    }
    f = f * pow(mapping.linear_factor(r.re, sign), 0.5 * rem(r.re) / dD(r.re));
  }
  return f;
}

Function superpotential(const Function& f) { return -f.derivative() / f; }

Function base_potential(const Function& W) { return W * W - W.derivative(); }

DeltaTerms delta_terms(const RationalFunction& R, const MappingSolution& mapping) {
  DeltaTerms out;
  if (R.is_zero()) return out;
  const RationalFunction T = reduced(-(mapping.g_prime_of_g * mapping.g_prime_of_g * R));
  out.composite = T;
  if (T.numerator().is_zero()) return out;
  if (T.numerator().nominal_degree() < T.denominator().degree()) {
    fail(ErrorKind::AnsatzMismatch, "-g'^2 R(g) has no constant part under this mapping");
  }
  const auto [P, rem] = T.numerator().divmod(T.denominator());
  out.delta_E = -P.coefficient(0);
  const Polynomial top =
      ((P - Polynomial(P.coefficient(0))) * T.denominator() + rem.chopped(1e-13)).chopped(1e-14);
  out.variable = RationalFunction(top, T.denominator());
  out.delta_V = top.trimmed().is_zero() ? Function(0.0) : compose_factored(out.variable, mapping);
  return out;
}

Function delta_superpotential(const FamilySpec& family, const MappingSolution& mapping) {
  Function ratio(0.0);  // dF/dg / F
  if (family.degree > 0) ratio = compose_family(family, 1, mapping.g) / compose_family(family, 0, mapping.g);
  if (family.kind == FamilyKind::GegenbauerComposite) {
    const double p = (2.0 * family.alpha + 1.0) / 4.0;
    ratio = ratio - Function(2.0 * p) * mapping.g / (mapping.linear_factor(1.0, -1.0) * mapping.linear_factor(-1.0, 1.0));
  }
  return -(ratio * mapping.g_prime);
}

ConstructedProblem assemble(std::span<const FamilySpec> families, const MappingSolution& mapping,
                            const AssembleOptions& options) {
  if (families.empty()) fail(ErrorKind::Parameter, "at least one level is required");
  ConstructedProblem p;
  p.label = options.label;
  p.mass_model = MassModel::unit();
  p.mass = Function(1.0);
  p.mapping = mapping;
  p.domain = mapping.domain;
  p.window = options.window.value_or(mapping.window);
  p.f = modulation_factor(ode_coefficients(families.front()).Q, mapping);
  p.W = superpotential(p.f);
  p.base_minus_eps = base_potential(p.W);
  p.epsilon = options.epsilon;
  p.V0 = p.base_minus_eps + Function(p.epsilon);
  for (const FamilySpec& spec : families) {
    spec.validate();
    Level level;
    level.n = spec.degree;
    level.family = spec;
    const DeltaTerms dt = delta_terms(ode_coefficients(spec).R, mapping);
    level.delta_V = dt.delta_V;
    level.delta_E = dt.delta_E;
    level.E = p.epsilon + dt.delta_E;
    level.F = family_in_x(spec, mapping);
    level.delta_W.value = delta_superpotential(spec, mapping);
    level.delta_W.nodes = level_nodes(spec, mapping.g, p.window);
    level.delta_W.radius = 1e-3 * p.window.width();
    p.levels.push_back(std::move(level));
  }
  finalize_problem(p);
  return p;
}

}  // namespace pdm::constant_mass
