#include "pdm/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdm/error.hpp"

namespace pdm {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// M >= 1e-10 on the Jacobi window
constexpr double kSechFloor = 1e5;
// spectrum levels with alpha - 1/2 below this decay slowly and get a flag
constexpr double kBorderline = 1e-2;

Expr radial_y(double a) { return exp(2.0 * a * Expr::variable()); }

struct Admission {
  std::vector<FamilySpec> families;
  std::vector<RejectedLevel> rejected;
};

Admission admit_levels(const HulthenFamilyParams& params) {
  Admission out;
  const double a = params.a;
  if (const auto* fm = std::get_if<FamilyMode>(&params.mode)) {
    out.families.push_back(FamilySpec::gegenbauer_composite(fm->n, fm->alpha));
    return out;
  }
  const auto& sm = std::get<SpectrumMode>(params.mode);
  for (int n = 0; n <= sm.n_max; ++n) {
    const double alpha = spectrum_alpha(sm.A, n);
    const double E = -a * a * (n + alpha) * (n + alpha);
    if (!(alpha > 0.5)) {
      std::string reason = alpha > -1.0 ? "alpha_n = " + num(alpha) + " <= 1/2: wavefunction does not decay"
                                        : "alpha_n = " + num(alpha) + " violates alpha > -1";
      out.rejected.push_back({n, alpha, E, reason});
      continue;
    }
    out.families.push_back(FamilySpec::gegenbauer_composite(n, alpha));
  }
  if (out.families.empty()) {
    fail(ErrorKind::EmptySpectrum, "no level n = 0.." + std::to_string(sm.n_max) + " is admitted for A = " + num(sm.A));
  }
  return out;
}

double slowest_alpha(const std::vector<FamilySpec>& families) {
  double m = families.front().alpha;
  for (const auto& s : families) m = std::min(m, s.alpha);
  return m;
}

double fixed_A(const HulthenFamilyParams& params) {
  if (const auto* fm = std::get_if<FamilyMode>(&params.mode)) return hulthen_A(fm->n, fm->alpha);
  return std::get<SpectrumMode>(params.mode).A;
}

}  // namespace

void JacobiPdmParams::validate() const {
  if (!(q > 0.0) || !std::isfinite(q)) fail(ErrorKind::Parameter, "q > 0 violated (q = " + num(q) + ")");
  if (!(alpha > -1.0)) fail(ErrorKind::Parameter, "alpha > -1 violated (alpha = " + num(alpha) + ")");
  if (!(beta > -1.0)) fail(ErrorKind::Parameter, "beta > -1 violated (beta = " + num(beta) + ")");
  if (n_max < 0) fail(ErrorKind::Parameter, "n_max >= 0 violated");
}

void HulthenFamilyParams::validate() const {
  if (!std::isfinite(a) || a == 0.0) fail(ErrorKind::Parameter, "a != 0 violated");
  if (a > 0.0) {
    fail(ErrorKind::Domain, "a < 0 is required for the radial domain r > 0 (a = " + num(a) + ")");
  }
  if (const auto* fm = std::get_if<FamilyMode>(&mode)) {
    if (!(fm->alpha > -1.0)) fail(ErrorKind::Parameter, "alpha > -1 violated (alpha = " + num(fm->alpha) + ")");
    if (fm->n < 0) fail(ErrorKind::Parameter, "degree n >= 0 violated");
    if (fm->n + fm->alpha == 0.0) fail(ErrorKind::Parameter, "n + alpha != 0 violated");
  } else {
    const auto& sm = std::get<SpectrumMode>(mode);
    if (!(sm.A > 0.5)) fail(ErrorKind::Parameter, "A > 1/2 violated (A = " + num(sm.A) + ")");
    if (sm.n_max < 0) fail(ErrorKind::Parameter, "n_max >= 0 violated");
  }
}

double hulthen_A(int n, double alpha) { return (n + alpha) * (n + alpha) + alpha * (1.0 - alpha) + 0.5; }

double spectrum_alpha(double A, int n) { return (A - n * n - 0.5) / (2.0 * n + 1.0); }

Function hulthen_potential_in_g(double a, double A) {
  const Expr g2 = 1.0 - radial_y(a);
  return Function(0.25 * a * a * ((6.0 - 4.0 * A) * g2 - 3.0) / (g2 * g2));
}

Function hulthen_potential_in_exp(double a, double A) {
  const Expr x = Expr::variable();
  const Expr e2 = exp(-2.0 * a * x);
  const Expr e4 = exp(-4.0 * a * x);
  const Expr den = 1.0 - e2;
  return Function(0.25 * a * a * ((3.0 - 4.0 * A) * e4 + (4.0 * A - 6.0) * e2) / (den * den));
}

double hulthen_potential_limit(double a, double A) { return 0.25 * a * a * (3.0 - 4.0 * A); }

Interval jacobi_window(double q) {
  const double X = std::acosh(kSechFloor) / std::abs(q);
  return {-X, X};
}

Interval radial_window(double a, double A, double alpha_min) {
  const double k = std::abs(a);
  // V - V(inf) ~ -a^2 A y for small y = exp(2ar).
  const double v_inf = std::abs(hulthen_potential_limit(a, A));
  const double target = 1e-10 * (v_inf > 0.0 ? v_inf : a * a);
  const double y_v = target / (a * a * std::max(std::abs(A), 1e-300));
  const double r_v = y_v < 1.0 ? -std::log(y_v) / (2.0 * k) : 0.0;
  // psi^2 ~ exp(-2 k (alpha - 1/2) r)
  const double decay = k * (alpha_min - 0.5);
  const double r_psi = decay > 0.0 ? std::log(1e12) / (2.0 * decay) : kInf;
  const double r_max = std::min(std::max({r_v, r_psi, 1.0 / k}), 200.0 / k);
  return {0.0, r_max};
}

ConstructedProblem jacobi_pdm(const JacobiPdmParams& params) {
  params.validate();
  const double q = params.q;
  const double al = params.alpha;
  const double be = params.beta;
  const Expr x = Expr::variable();
  const Expr qx = q * x;
  const Expr s = sech(qx);

  ConstructedProblem p;
  p.label = "jacobi-pdm";
  p.mass_model = MassModel::proportional_to_g_prime(1.0 / q);
  p.mapping = solve_mapping(MappingAnsatz::tanh_branch(q));
  p.domain = p.mapping.domain;
  p.window = jacobi_window(q);
  p.mapping.window = p.window;
  p.mass = Function(pow(s, 2.0));
  // (1 - tanh)^((a+1)/2) (1 + tanh)^((b+1)/2) with 1 -+ tanh = exp(-+qx) sech
  p.f = Function(exp(0.5 * (be - al) * qx) * pow(s, 0.5 * (al + be + 2.0)));
  p.W = Function(-0.5 * q * ((be + 1.0) * exp(-qx) - (al + 1.0) * exp(qx)));
  p.epsilon = 0.5 * q * q * (al + 1.0) * (be + 1.0);
  p.V0 = Function(0.25 * q * q * ((al * al - 1.0) * exp(2.0 * qx) + (be * be - 1.0) * exp(-2.0 * qx)));
  p.base_minus_eps = p.V0 - Function(p.epsilon);

  for (int n = 0; n <= params.n_max; ++n) {
    const FamilySpec spec = FamilySpec::jacobi(n, al, be);
    Level level;
    level.n = n;
    level.family = spec;
    level.F = Function(family_basis(spec, 0, tanh(qx)));
    level.delta_V = Function(0.0);
    level.delta_E = q * q * n * (n + al + be + 1.0);
    level.E = p.epsilon + level.delta_E;
    level.delta_W.radius = 1e-3 * p.window.width();
    if (n > 0) {
      level.delta_W.value = Function(-q * s * family_basis(spec, 1, tanh(qx)) / family_basis(spec, 0, tanh(qx)));
      level.delta_W.nodes = level_nodes(spec, p.mapping.g, p.window);
    }
    p.levels.push_back(std::move(level));
  }
  finalize_problem(p);
  return p;
}

ConstructedProblem gegenbauer_radial(const HulthenFamilyParams& params) {
  params.validate();
  if (std::holds_alternative<SpectrumMode>(params.mode)) return hulthen_spectrum(params);

  const double a = params.a;
  const double c = -a;
  const double A = fixed_A(params);
  const Admission adm = admit_levels(params);
  const Expr y = radial_y(a);
  const Expr g = sqrt(1.0 - y);

  ConstructedProblem p;
  p.label = "gegenbauer-radial";
  p.mass_model = MassModel::unit();
  p.mass = Function(1.0);
  p.mapping = solve_mapping(MappingAnsatz::sqrt_exp_branch(c));
  p.domain = p.mapping.domain;
  p.window = radial_window(a, A, slowest_alpha(adm.families));
  p.mapping.window = p.window;
  // (1/g')^(1/2) with g' = -a y / g
  p.f = Function(sqrt(g / (c * y)));
  p.W = Function(0.5 * a * (y / (1.0 - y) + 2.0));
  p.epsilon = -0.25 * a * a;
  p.V0 = Function(0.25 * a * a * (3.0 - 6.0 * y) / ((y - 1.0) * (y - 1.0)));
  p.base_minus_eps = p.V0 - Function(p.epsilon);
  p.rejected = adm.rejected;
  const Function delta_V = Function(-a * a * A / (1.0 - y));

  for (const FamilySpec& spec : adm.families) {
    const double al = spec.alpha;
    const double pw = (2.0 * al + 1.0) / 4.0;
    Level level;
    level.n = spec.degree;
    level.family = spec;
    level.F = Function(pow(y, pw) * family_basis(spec, 0, g));
    level.delta_V = delta_V;
    level.delta_E = a * a * (0.25 - (spec.degree + al) * (spec.degree + al));
    level.E = p.epsilon + level.delta_E;
    level.borderline = al - 0.5 < kBorderline;
    // -F'(g) g' / F with the prefactor contributing 2a p (chain rule on y^p).
    Expr dw = -2.0 * a * pw;
    if (spec.degree > 0) {
      dw = dw - family_basis(spec, 1, g) * (c * y / g) / family_basis(spec, 0, g);
      level.delta_W.nodes = level_nodes(spec, p.mapping.g, p.window);
    }
    level.delta_W.value = Function(dw);
    level.delta_W.radius = 1e-3 * p.window.width();
    p.levels.push_back(std::move(level));
  }
  finalize_problem(p);
  return p;
}

ConstructedProblem hulthen_spectrum(const HulthenFamilyParams& params) {
  params.validate();
  if (!std::holds_alternative<SpectrumMode>(params.mode)) {
    fail(ErrorKind::Parameter, "hulthen_spectrum needs the spectrum mode (A, n_max)");
  }
  // Same closed forms as a single-level family, one level per admitted n.
  const Admission adm = admit_levels(params);
  const double A = std::get<SpectrumMode>(params.mode).A;
  ConstructedProblem out;
  bool first = true;
  for (const FamilySpec& spec : adm.families) {
    ConstructedProblem one = gegenbauer_radial({params.a, FamilyMode{spec.degree, spec.alpha}});
    if (first) {
      out = std::move(one);
      first = false;
    } else {
      out.levels.push_back(std::move(one.levels.front()));
    }
  }
  // One window for all levels, set by the slowest-decaying one, and
  // re-normalize there.
  out.window = radial_window(params.a, A, slowest_alpha(adm.families));
  out.mapping.window = out.window;
  for (Level& level : out.levels) {
    level.delta_W.radius = 1e-3 * out.window.width();
    if (level.n > 0) level.delta_W.nodes = level_nodes(level.family, out.mapping.g, out.window);
  }
  out.rejected = adm.rejected;
  finalize_problem(out);
  return out;
}

EngineInputs jacobi_pdm_engine_inputs(const JacobiPdmParams& params) {
  params.validate();
  EngineInputs in{{}, solve_mapping(MappingAnsatz::tanh_branch(params.q)),
                  MassModel::proportional_to_g_prime(1.0 / params.q), {}};
  for (int n = 0; n <= params.n_max; ++n) in.families.push_back(FamilySpec::jacobi(n, params.alpha, params.beta));
  in.options.epsilon = 0.5 * params.q * params.q * (params.alpha + 1.0) * (params.beta + 1.0);
  in.options.window = jacobi_window(params.q);
  in.options.label = "jacobi-pdm (engine)";
  return in;
}

EngineInputs gegenbauer_radial_engine_inputs(const HulthenFamilyParams& params) {
  params.validate();
  const Admission adm = admit_levels(params);
  EngineInputs in{adm.families, solve_mapping(MappingAnsatz::sqrt_exp_branch(-params.a)), MassModel::unit(), {}};
  in.options.epsilon = -0.25 * params.a * params.a;
  in.options.window = radial_window(params.a, fixed_A(params), slowest_alpha(adm.families));
  in.options.label = "gegenbauer-radial (engine)";
  return in;
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"jacobi-pdm",
       "Jacobi polynomial seed with a sech^2 mass; V = V0, E_n = q^2 (a+1)(b+1)/2 + q^2 n(n+a+b+1)",
       "g = tanh(q x)",
       "M = sech^2(q x) = g'/q",
       {{"q", "q > 0"}, {"alpha", "alpha > -1"}, {"beta", "beta > -1"}, {"levels", "levels >= 1 (n = 0..levels-1)"}}},
      {"gegenbauer-radial",
       "Gegenbauer normal-form seed on r > 0, Hulthen-like potential; E = -a^2 (n+alpha)^2",
       "g = [1 - exp(2 a r)]^(1/2)",
       "M = 1",
       {{"a", "a < 0"},
        {"A", "spectrum mode: A > 1/2; level n admitted when alpha_n = (A - n^2 - 1/2)/(2n+1) > 1/2"},
        {"n, alpha", "family mode: alpha > -1, n >= 0, n + alpha != 0"},
        {"levels", "spectrum mode: levels >= 1 (n = 0..levels-1)"}}},
  };
  return entries;
}

}  // namespace pdm
