#include "pdm/construct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdm/error.hpp"
#include "pdm/quadrature.hpp"

namespace pdm {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Polynomial linear(double c0, double c1) { return Polynomial(std::vector<double>{c0, c1}); }

// 1 - g^2
Polynomial one_minus_sq() { return Polynomial(std::vector<double>{1.0, 0.0, -1.0}); }

double default_half_width(double rate) { return 20.0 / std::abs(rate); }

Interval working_window(const Interval& domain, double x0, double rate) {
  const double lo = std::isfinite(domain.lo) ? domain.lo : x0 - default_half_width(rate);
  const double hi = std::isfinite(domain.hi) ? domain.hi : x0 + default_half_width(rate);
  if (!(hi > lo)) fail(ErrorKind::Domain, "empty working window");
  return {lo, hi};
}

Interval sorted(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

// Integrates g' = c h(g) with classical RK4 on a uniform grid over `window`,
// starting from g(x0) = g0.
SampledFunction integrate_mapping(const MappingAnsatz& a, Interval window, int resolution) {
  const auto n = static_cast<std::size_t>(resolution);
  const double h = window.width() / static_cast<double>(n - 1);
  const auto rhs = [&](double g) { return a.rate * a.shape(g); };
  const auto step = [&](double g, double dx) {
    const double k1 = rhs(g);
    const double k2 = rhs(g + 0.5 * dx * k1);
    const double k3 = rhs(g + 0.5 * dx * k2);
    const double k4 = rhs(g + dx * k3);
    return g + dx * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  };
  const auto inside = [&](double g) {
    return std::isfinite(g) && g > a.g_domain.lo && g < a.g_domain.hi;
  };

  std::vector<double> y(n);
  // Grid node at or just left of x0.
  const double pos = (a.x0 - window.lo) / h;
  auto left = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 1)));
  if (left == n - 1 && n > 1) left = n - 2;
  const double xl = window.lo + static_cast<double>(left) * h;
  const double xr = xl + h;

  // Partial steps from x0 onto the two neighbouring nodes, split in four.
  auto partial = [&](double target) {
    double g = a.g0;
    const double dx = (target - a.x0) / 4.0;
    for (int k = 0; k < 4; ++k) g = step(g, dx);
    return g;
  };
  y[left] = partial(xl);
  y[left + 1] = partial(xr);
  for (std::size_t i = left + 1; i + 1 < n; ++i) y[i + 1] = step(y[i], h);
  for (std::size_t i = left; i > 0; --i) y[i - 1] = step(y[i], -h);

  for (std::size_t i = 0; i < n; ++i) {
    if (!inside(y[i])) {
      fail(ErrorKind::Range, "numerically integrated g leaves (" + num(a.g_domain.lo) + ", " + num(a.g_domain.hi) +
                                 ") at x = " + num(window.lo + static_cast<double>(i) * h));
    }
  }
  return SampledFunction(window.lo, h, std::move(y));
}

bool simple_real_roots(const std::vector<PolynomialRoot>& rs) {
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].im != 0.0) return false;
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (std::abs(rs[i].re - rs[j].re) <= 1e-9 * std::max(1.0, std::abs(rs[i].re))) return false;
    }
  }
  return true;
}

double orientation(double root, const Interval& range) {
  if (root <= range.lo) return 1.0;
  if (root >= range.hi) return -1.0;
  fail(ErrorKind::Singularity, "Q has a non-integrable pole at g = " + num(root) + " inside the g-range (" +
                                   num(range.lo) + ", " + num(range.hi) + ")");
}

// exp((1/2) Int Q dg) sampled over the mapping window; used when the
// denominator of Q has complex or repeated roots.
Function exp_half_integral_numeric(const RationalFunction& Q, const MappingSolution& mapping) {
  const Interval w = mapping.window;
  const auto n = static_cast<std::size_t>(std::max(mapping.resolution, 3));
  const double h = w.width() / static_cast<double>(n - 1);
  std::vector<double> gs(n);
  for (std::size_t i = 0; i < n; ++i) gs[i] = mapping.g(w.lo + static_cast<double>(i) * h);
  const auto q = [&Q](double g) {
    const double v = Q(g);
    if (!std::isfinite(v)) fail(ErrorKind::Singularity, "Q is singular at g = " + num(g));
    return v;
  };
  std::vector<double> acc(n, 0.0);
  const std::size_t mid = n / 2;
  for (std::size_t i = mid + 1; i < n; ++i) acc[i] = acc[i - 1] + integrate(q, gs[i - 1], gs[i], 1e-12);
  for (std::size_t i = mid; i > 0; --i) acc[i - 1] = acc[i] - integrate(q, gs[i - 1], gs[i], 1e-12);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = std::exp(0.5 * acc[i]);
  return Function(SampledFunction(w.lo, h, std::move(vals)));
}

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double v : xs) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::TanhBranch: return "tanh";
    case MappingKind::SqrtExpBranch: return "sqrt-exp";
    case MappingKind::Identity: return "identity";
    case MappingKind::NumericRational: return "numeric";
  }
  return "?";
}

Function MappingSolution::linear_factor(double root, double sign) const {
  if (root == 1.0 && one_minus_g) return sign < 0.0 ? *one_minus_g : -*one_minus_g;
  if (root == -1.0 && one_plus_g) return sign > 0.0 ? *one_plus_g : -*one_plus_g;
  return compose(RationalFunction(linear(-sign * root, sign)), g);
}

Function compose_factored(const RationalFunction& r, const MappingSolution& mapping) {
  const Polynomial N = r.numerator().trimmed();
  const Polynomial D = r.denominator().trimmed();
  if (N.is_zero()) return Function(0.0);
  const std::vector<PolynomialRoot> nr = N.degree() > 0 ? roots(N) : std::vector<PolynomialRoot>{};
  const std::vector<PolynomialRoot> dr = D.degree() > 0 ? roots(D) : std::vector<PolynomialRoot>{};
  const auto real = [](const PolynomialRoot& z) { return z.im == 0.0; };
  if (!std::all_of(nr.begin(), nr.end(), real) || !std::all_of(dr.begin(), dr.end(), real)) {
    return compose(r, mapping.g);
  }
  Function out(N.leading() / D.leading());
  for (const PolynomialRoot& z : nr) out = out * mapping.linear_factor(z.re, 1.0);
  for (const PolynomialRoot& z : dr) out = out / mapping.linear_factor(z.re, 1.0);
  return out;
}

// The composite prefactor (1-g^2)^p goes through the accurate factors.
Function family_in_x(const FamilySpec& spec, const MappingSolution& mapping) {
  if (spec.kind != FamilyKind::GegenbauerComposite) return family_function(spec, mapping.g);
  const double p = (2.0 * spec.alpha + 1.0) / 4.0;
  return pow(mapping.linear_factor(1.0, -1.0), p) * pow(mapping.linear_factor(-1.0, 1.0), p) *
         compose_family(spec, 0, mapping.g);
}

MappingAnsatz MappingAnsatz::tanh_branch(double c, Interval domain, double x0, double g0) {
  MappingAnsatz a;
  a.kind = MappingKind::TanhBranch;
  a.rate = c;
  a.domain = domain;
  a.x0 = x0;
  a.g0 = g0;
  return a;
}

MappingAnsatz MappingAnsatz::sqrt_exp_branch(double c, Interval domain, double x0, double g0) {
  MappingAnsatz a;
  a.kind = MappingKind::SqrtExpBranch;
  a.rate = c;
  a.domain = domain;
  a.x0 = x0;
  a.g0 = g0;
  return a;
}

MappingAnsatz MappingAnsatz::identity(Interval domain, Interval g_domain) {
  MappingAnsatz a;
  a.kind = MappingKind::Identity;
  a.domain = domain;
  a.g_domain = g_domain;
  a.x0 = std::isfinite(domain.lo) && std::isfinite(domain.hi) ? domain.mid() : 0.0;
  a.g0 = a.x0;
  return a;
}

MappingAnsatz MappingAnsatz::numeric_rational(double c, RationalFunction h, Interval domain, double x0, double g0) {
  MappingAnsatz a;
  a.kind = MappingKind::NumericRational;
  a.rate = c;
  a.shape = std::move(h);
  a.domain = domain;
  a.x0 = x0;
  a.g0 = g0;
  return a;
}

void MappingAnsatz::validate() const {
  if (!(domain.hi > domain.lo)) fail(ErrorKind::Parameter, "mapping domain must satisfy lo < hi");
  if (kind == MappingKind::Identity) return;
  if (!(rate != 0.0) || !std::isfinite(rate)) fail(ErrorKind::Parameter, "mapping rate c != 0 violated");
  if (kind == MappingKind::SqrtExpBranch) {
    // g0 = 0 sits on the boundary of the branch; it is the usual start.
    if (!(std::abs(g0) < 1.0)) fail(ErrorKind::Parameter, "initial g0 must lie in [0, 1) in magnitude");
    return;
  }
  if (!(g0 > g_domain.lo && g0 < g_domain.hi)) {
    fail(ErrorKind::Parameter, "initial g0 = " + num(g0) + " must lie inside the target g-domain");
  }
}

MappingSolution solve_mapping(const MappingAnsatz& ansatz, int resolution) {
  ansatz.validate();
  if (resolution < 2) fail(ErrorKind::Parameter, "mapping resolution must be >= 2");

  MappingSolution sol{ansatz, Function(0.0), Function(0.0), RationalFunction(1.0), ansatz.domain, {}, {}, resolution, std::nullopt, std::nullopt};
  const Expr x = Expr::variable();
  const double c = ansatz.rate;

  switch (ansatz.kind) {
    case MappingKind::TanhBranch: {
      const Expr arg = c * (x - ansatz.x0) + std::atanh(ansatz.g0);
      const Expr g = tanh(arg);
      sol.g = g;
      sol.g_prime = g.derivative();
      sol.g_prime_of_g = RationalFunction(c * one_minus_sq());
      sol.one_minus_g = Function(exp(-arg) * sech(arg));
      sol.one_plus_g = Function(exp(arg) * sech(arg));
      sol.window = working_window(ansatz.domain, ansatz.x0, c);
      const auto at = [&](double xv) { return std::tanh(c * (xv - ansatz.x0) + std::atanh(ansatz.g0)); };
      sol.g_range = sorted(at(ansatz.domain.lo), at(ansatz.domain.hi));
      break;
    }
    case MappingKind::SqrtExpBranch: {
      const double u0 = 1.0 - ansatz.g0 * ansatz.g0;
      const double sign = ansatz.g0 < 0.0 ? -1.0 : 1.0;
      const auto radicand = [&](double xv) { return 1.0 - u0 * std::exp(-2.0 * c * (xv - ansatz.x0)); };
      // Only the end points can fail: the radicand is monotone in x.
      for (double end : {ansatz.domain.lo, ansatz.domain.hi}) {
        const double r = radicand(end);
        if (std::isnan(r) || r < -1e-15) {
          fail(ErrorKind::Domain, "radicand 1 - " + num(u0) + " exp(" + num(-2.0 * c) + " (x - " + num(ansatz.x0) +
                                      ")) is negative at x = " + num(end) + " inside the requested domain");
        }
      }
      const Expr u = u0 * exp(-2.0 * c * (x - ansatz.x0));
      const Expr g = sign * sqrt(1.0 - u);
      sol.g = g;
      // 1 - g^2 = u; the factor that vanishes is taken as u over the other
      if (sign > 0.0) {
        sol.one_plus_g = Function(1.0 + g);
        sol.one_minus_g = Function(u / (1.0 + g));
      } else {
        sol.one_minus_g = Function(1.0 - g);
        sol.one_plus_g = Function(u / (1.0 - g));
      }
      sol.g_prime = g.derivative();
      sol.g_prime_of_g = RationalFunction(c * one_minus_sq(), linear(0.0, 1.0));
      sol.window = working_window(ansatz.domain, ansatz.x0, c);
      const auto at = [&](double xv) { return sign * std::sqrt(std::max(0.0, radicand(xv))); };
      sol.g_range = sorted(at(ansatz.domain.lo), at(ansatz.domain.hi));
      break;
    }
    case MappingKind::Identity: {
      sol.g = Function::x();
      sol.g_prime = Function(1.0);
      sol.g_prime_of_g = RationalFunction(1.0);
      sol.window = working_window(ansatz.domain, ansatz.x0, 1.0);
      sol.g_range = ansatz.domain;
      break;
    }
    case MappingKind::NumericRational: {
      sol.window = working_window(ansatz.domain, ansatz.x0, c);
      SampledFunction g = integrate_mapping(ansatz, sol.window, resolution);
      std::vector<double> gp(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) gp[i] = c * ansatz.shape(g.values()[i]);
      const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
      sol.g_range = {*lo, *hi};
      sol.g_prime = SampledFunction(g.x0(), g.step(), std::move(gp));
      sol.g = std::move(g);
      sol.g_prime_of_g = c * ansatz.shape;
      break;
    }
  }
  if (ansatz.kind != MappingKind::Identity &&
      (sol.g_range.lo < ansatz.g_domain.lo - 1e-15 || sol.g_range.hi > ansatz.g_domain.hi + 1e-15)) {
    fail(ErrorKind::Range, "g leaves the target domain over the requested x-domain");
  }
  return sol;
}

void MassModel::validate() const {
  if (kind == MassKind::ProportionalToGPrime && !(lambda > 0.0)) {
    fail(ErrorKind::Parameter, "mass scale lambda > 0 violated (lambda = " + num(lambda) + ")");
  }
  if (kind == MassKind::SechSquared && !(q != 0.0)) fail(ErrorKind::Parameter, "mass rate q != 0 violated");
}

std::string MassModel::describe() const {
  switch (kind) {
    case MassKind::Unit: return "M = 1";
    case MassKind::ProportionalToGPrime: return "M = " + num(lambda) + " g'";
    case MassKind::SechSquared: return "M = sech^2(" + num(q) + " x)";
  }
  return "?";
}

Function mass_function(const MassModel& mass, const MappingSolution& mapping) {
  mass.validate();
  switch (mass.kind) {
    case MassKind::Unit: return Function(1.0);
    case MassKind::ProportionalToGPrime: return Function(mass.lambda) * mapping.g_prime;
    case MassKind::SechSquared: return Function(pow(sech(mass.q * Expr::variable()), 2.0));
  }
  return Function(1.0);
}

std::optional<RationalFunction> mass_in_g(const MassModel& mass, const MappingSolution& mapping) {
  switch (mass.kind) {
    case MassKind::Unit: return RationalFunction(1.0);
    case MassKind::ProportionalToGPrime: return mass.lambda * mapping.g_prime_of_g;
    case MassKind::SechSquared: {
      const MappingAnsatz& a = mapping.ansatz;
      if (a.kind == MappingKind::TanhBranch && std::abs(a.rate) == std::abs(mass.q) && a.x0 == 0.0 && a.g0 == 0.0) {
        return RationalFunction(one_minus_sq());
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool GuardedFunction::excluded(double x) const {
  return std::any_of(nodes.begin(), nodes.end(), [&](double z) { return std::abs(x - z) < radius; });
}

double GuardedFunction::operator()(double x) const {
  if (excluded(x)) fail(ErrorKind::Node, "x = " + num(x) + " lies inside a node exclusion window");
  return value(x);
}

Function modulation_factor(const RationalFunction& Q, const MappingSolution& mapping, const MassModel& mass) {
  const Function M = mass_function(mass, mapping);
  const double gp_mid = mapping.g_prime(mapping.window.mid());
  const double orient = gp_mid < 0.0 ? -1.0 : 1.0;

  // (M / g')^(1/2), as a rational function of g whenever the mass allows it.
  Function amplitude(1.0);
  if (const auto Mg = mass_in_g(mass, mapping)) {
    const RationalFunction ratio = reduced(orient * (*Mg / mapping.g_prime_of_g));
    const bool constant = ratio.numerator().degree() <= 0 && ratio.denominator().degree() <= 0;
    if (constant) {
      amplitude = std::sqrt(ratio(0.0));
    } else {
      amplitude = sqrt(compose_factored(ratio, mapping));
    }
  } else {
    amplitude = sqrt(Function(orient) * M / mapping.g_prime);
  }

  if (Q.is_zero()) return amplitude;

  const RationalFunction Qr = reduced(Q);
  const Polynomial& D = Qr.denominator();
  const auto [P, rem] = Qr.numerator().divmod(D);
  const std::vector<PolynomialRoot> rs = roots(D.trimmed());
  if (!simple_real_roots(rs)) return amplitude * exp_half_integral_numeric(Qr, mapping);

  Function out = amplitude;
  const Polynomial half_int = 0.5 * P.antiderivative();
  if (!half_int.trimmed().is_zero()) out = out * exp(compose(RationalFunction(half_int), mapping.g));

  const Polynomial dD = D.derivative();
  for (const PolynomialRoot& r : rs) {
    const double residue = rem(r.re) / dD(r.re);
    if (residue == 0.0) continue;
    const double sign = orientation(r.re, mapping.g_range);
    out = out * pow(mapping.linear_factor(r.re, sign), 0.5 * residue);
  }
  return out;
}

Function superpotential(const Function& f, const Function& mass, Interval window) {
  const std::vector<double> zeros = find_zeros(f, window);
  if (!zeros.empty()) {
    fail(ErrorKind::Node, "modulation factor f vanishes at x = " + num(zeros.front()) + "; f must be nodeless");
  }
  return -f.derivative() / (sqrt(mass) * f);
}

Function base_potential(const Function& W, const Function& mass) {
  return W * W - (W / sqrt(mass)).derivative();
}

DeltaTerms delta_terms(const RationalFunction& R, const MappingSolution& mapping, const MassModel& mass) {
  DeltaTerms out;
  if (R.is_zero()) return out;

  const auto Mg = mass_in_g(mass, mapping);
  if (!Mg) {
    fail(ErrorKind::AnsatzMismatch, mass.describe() + " cannot be written through g for the " +
                                        to_string(mapping.ansatz.kind) + " mapping; no exact split exists");
  }
  const RationalFunction K = mapping.g_prime_of_g * mapping.g_prime_of_g / *Mg;
  const RationalFunction T = reduced(-(K * R));
  out.composite = T;

  const Polynomial& N = T.numerator();
  const Polynomial& D = T.denominator();
  if (N.is_zero()) return out;
  if (N.nominal_degree() < D.degree()) {
    fail(ErrorKind::AnsatzMismatch, "-(g'^2/M) R(g) has no constant part under the " +
                                        to_string(mapping.ansatz.kind) + " mapping; this combination is not exactly solvable");
  }
  const auto [P, rem] = N.divmod(D);
  const double constant = P.coefficient(0);
  out.delta_E = -constant;

  Polynomial variable_poly = P - Polynomial(constant);
  double scale = 0.0;
  for (double v : N.coefficients()) scale = std::max(scale, std::abs(v));
  const Polynomial remainder = rem.chopped(1e-13);
  const Polynomial top = (variable_poly * D + remainder).chopped(1e-14);
  out.variable = RationalFunction(top, D);
  if (top.trimmed().is_zero() || scale == 0.0) {
    out.delta_V = Function(0.0);
  } else {
    out.delta_V = compose_factored(out.variable, mapping);
  }
  return out;
}

std::vector<double> level_nodes(const FamilySpec& family, const Function& g, Interval window) {
  std::vector<double> out;
  const std::vector<double> zs = polynomial_zeros(family.polynomial_part());
  if (zs.empty()) return out;
  const double glo = g(window.lo);
  const double ghi = g(window.hi);
  const bool increasing = ghi > glo;
  for (double z : zs) {
    if (!(z > std::min(glo, ghi) && z < std::max(glo, ghi))) continue;
    double a = window.lo;
    double b = window.hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double m = 0.5 * (a + b);
      if ((g(m) < z) == increasing) a = m; else b = m;
    }
    out.push_back(0.5 * (a + b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

GuardedFunction delta_superpotential(const FamilySpec& family, const MappingSolution& mapping, const MassModel& mass) {
  family.validate();
  GuardedFunction out;
  out.radius = 1e-3 * mapping.window.width();
  if (family.degree == 0 && family.kind != FamilyKind::GegenbauerComposite) return out;

  const Function M = mass_function(mass, mapping);
  Function log_derivative(0.0);  // F'/F in g
  if (family.degree > 0) {
    log_derivative = compose_family(family, 1, mapping.g) / compose_family(family, 0, mapping.g);
    out.nodes = level_nodes(family, mapping.g, mapping.window);
  }
  if (family.kind == FamilyKind::GegenbauerComposite) {
    const double p = (2.0 * family.alpha + 1.0) / 4.0;
    if (p != 0.0) {
      const RationalFunction prefactor(Polynomial(std::vector<double>{0.0, -2.0 * p}), one_minus_sq());
      log_derivative = log_derivative + compose_factored(prefactor, mapping);
    }
  }
  out.value = -(log_derivative * mapping.g_prime) / sqrt(M);
  return out;
}

void finalize_problem(ConstructedProblem& problem) {
  const Function& M = problem.mass;
  const Function root_M = sqrt(M);
  problem.W_sq = problem.W * problem.W;
  problem.W_flux_derivative = (problem.W / root_M).derivative();

  const Interval w = problem.window;
  for (Level& level : problem.levels) {
    const Function raw = problem.f * level.F;
    const auto sq = [&raw](double x) {
      const double v = raw(x);
      return v * v;
    };
    level.norm = integrate(sq, w.lo, w.hi, 1e-13);
    if (!(level.norm > 0.0) || !std::isfinite(level.norm)) {
      fail(ErrorKind::Numerical, "wavefunction norm is not finite and positive (level n = " +
                                     std::to_string(level.n) + ")");
    }
    level.psi = raw * Function(1.0 / std::sqrt(level.norm));
    level.nodes = level.delta_W.nodes;
    level.delta_W_sq = level.delta_W.value * level.delta_W.value;
    level.delta_W_flux_derivative = (level.delta_W.value / root_M).derivative();
    level.cross = Function(2.0) * problem.W * level.delta_W.value;
    level.kinetic = -((level.psi.derivative() / M).derivative());
  }
  for (std::size_t i = 0; i < problem.levels.size(); ++i) {
    Level& level = problem.levels[i];
    // Decay check beyond the window: doubling the extension must add next to nothing.
    try {
      const double t1 = tail_beyond_window(problem, i, w.width());
      const double t2 = tail_beyond_window(problem, i, 2.0 * w.width());
      level.normalizable = std::isfinite(t2) && (t2 - t1) <= 1e-6 * std::max(t1, 1e-300) + 1e-14;
    } catch (const Error&) {
      level.normalizable = true;  // nothing to check past a sampled window
    }
  }
}

ConstructedProblem assemble_problem(std::span<const FamilySpec> families, const MappingSolution& mapping,
                                    const MassModel& mass, const AssembleOptions& options) {
  if (families.empty()) fail(ErrorKind::Parameter, "at least one level is required");
  mass.validate();
  for (const FamilySpec& spec : families) spec.validate();

  ConstructedProblem p;
  p.label = options.label;
  p.mass_model = mass;
  p.mapping = mapping;
  p.domain = mapping.domain;
  p.window = options.window.value_or(mapping.window);
  p.mass = mass_function(mass, mapping);

  for (double x : sample_open(p.mass, p.window, 257)) {
    if (!(x > 0.0)) fail(ErrorKind::Parameter, "mass function must be positive on the working window");
  }

  const RationalFunction Q = ode_coefficients(families.front()).Q;
  for (const FamilySpec& spec : families) {
    const RationalFunction Qi = ode_coefficients(spec).Q;
    for (double g : {-0.7, -0.3, 0.1, 0.45, 0.8, 2.5}) {
      const double a = Q(g);
      const double b = Qi(g);
      if (std::abs(a - b) > 1e-13 * std::max(1.0, std::abs(a))) {
        fail(ErrorKind::Parameter, "all levels must share Q(g); " + spec.describe() + " does not");
      }
    }
  }

  p.f = modulation_factor(Q, mapping, mass);
  p.W = superpotential(p.f, p.mass, p.window);
  p.base_minus_eps = base_potential(p.W, p.mass);
  p.epsilon = options.epsilon;
  p.V0 = p.base_minus_eps + Function(p.epsilon);

  for (const FamilySpec& spec : families) {
    try {
      Level level;
      level.n = spec.degree;
      level.family = spec;
      const DeltaTerms dt = delta_terms(ode_coefficients(spec).R, mapping, mass);
      level.delta_V = dt.delta_V;
      level.delta_E = dt.delta_E;
      level.E = p.epsilon + dt.delta_E;
      level.F = family_in_x(spec, mapping);
      level.delta_W = delta_superpotential(spec, mapping, mass);
      level.delta_W.radius = 1e-3 * p.window.width();
      p.levels.push_back(std::move(level));
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (level n = " + std::to_string(spec.degree) + ")");
    }
  }
  finalize_problem(p);
  return p;
}

RiccatiResiduals riccati_residuals(const ConstructedProblem& problem, double x, std::size_t level) {
  const Level& L = problem.levels.at(level);
  RiccatiResiduals r;
  const double w2 = problem.W_sq(x);
  const double wd = problem.W_flux_derivative(x);
  const double v0 = problem.V0(x);
  r.base = w2 - wd - (v0 - problem.epsilon);
  r.base_scale = max_abs({w2, wd, v0, problem.epsilon});

  const double dw = L.delta_W(x);  // throws inside an exclusion window
  const double d2 = L.delta_W_sq(x);
  const double dd = L.delta_W_flux_derivative(x);
  const double cr = L.cross(x);
  const double dv = L.delta_V(x);
  r.delta = d2 - dd + cr - (dv - L.delta_E);
  r.delta_scale = max_abs({d2, dd, cr, dv, L.delta_E, dw * dw});
  return r;
}

SampledCoefficients infer_ode_coefficients(const ConstructedProblem& problem, std::size_t level,
                                           std::span<const double> xs) {
  const Level& L = problem.levels.at(level);
  const Function& g = problem.mapping.g;
  const Function& gp = problem.mapping.g_prime;
  const Function gpp = gp.derivative();
  const Function& f = problem.f;
  const Function fp = f.derivative();
  const Function fpp = fp.derivative();
  const Function& M = problem.mass;
  const Function Mp = M.derivative();
  const Function V = problem.potential(level);

  SampledCoefficients out;
  for (double x : xs) {
    const double g1 = gp(x);
    const double lf = fp(x) / f(x);
    const double lm = Mp(x) / M(x);
    out.x.push_back(x);
    out.g.push_back(g(x));
    out.Q.push_back((gpp(x) / g1 + 2.0 * lf - lm) / g1);
    out.R.push_back((fpp(x) / f(x) - lm * lf + M(x) * (L.E - V(x))) / (g1 * g1));
  }
  return out;
}

PointResidual schrodinger_residual(const ConstructedProblem& problem, std::size_t level, double x) {
  const Level& L = problem.levels.at(level);
  const double psi = L.psi(x);
  const double V = problem.potential(level)(x);
  PointResidual r;
  r.value = L.kinetic(x) + (V - L.E) * psi;
  r.scale = std::max(std::abs(L.E * psi), std::abs(V * psi));
  return r;
}

ConstructedProblem shift_split(const ConstructedProblem& problem, double shift) {
  ConstructedProblem out = problem;
  out.epsilon += shift;
  out.V0 = out.V0 + Function(shift);
  for (Level& level : out.levels) level.E += shift;
  return out;
}

double tail_beyond_window(const ConstructedProblem& problem, std::size_t level, double extension) {
  const Level& L = problem.levels.at(level);
  const auto sq = [&L](double x) {
    const double v = L.psi(x);
    return v * v;
  };
  double tail = 0.0;
  const Interval w = problem.window;
  if (problem.domain.lo < w.lo) tail += integrate(sq, std::max(problem.domain.lo, w.lo - extension), w.lo, 1e-13);
  if (problem.domain.hi > w.hi) tail += integrate(sq, w.hi, std::min(problem.domain.hi, w.hi + extension), 1e-13);
  return tail;
}

}  // namespace pdm
