#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdm/function.hpp"
#include "pdm/interval.hpp"
#include "pdm/polynomial.hpp"
#include "pdm/specfun.hpp"

// Construction of exactly solvable problems for
//
//   -d/dx [ (1/M) dPsi/dx ] + V Psi = E Psi        (hbar = 2 m0 = 1)
//
// from a special-function seed F(g) with F'' + Q F' + R F = 0, via
// Psi = f(x) F(g(x)). The mapping g(x) comes from the first-order ODE
// singled out by the constant split of -(g'^2/M) R(g); f follows from Q;
// the superpotential W = -f'/(sqrt(M) f) gives the base potential through
// W^2 - (W/sqrt(M))' = V0 - eps, and the level-dependent remainder gives
// (Delta V, Delta E).

namespace pdm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class MappingKind {
  TanhBranch,       // g' = c (1 - g^2)
  SqrtExpBranch,    // g g' = c (1 - g^2), g = [1 - u0 exp(-2c(x-x0))]^(1/2)
  Identity,         // g' = 1
  NumericRational,  // g' = c h(g), integrated numerically
};

std::string to_string(MappingKind kind);

struct MappingAnsatz {
  MappingKind kind = MappingKind::Identity;
  double rate = 1.0;
  double x0 = 0.0;
  double g0 = 0.0;
  Interval domain{-kInf, kInf};
  Interval g_domain{-1.0, 1.0};  // closed target range of g
  RationalFunction shape{1.0};   // h(g), NumericRational only

  static MappingAnsatz tanh_branch(double c, Interval domain = {-kInf, kInf}, double x0 = 0.0, double g0 = 0.0);
  static MappingAnsatz sqrt_exp_branch(double c, Interval domain = {0.0, kInf}, double x0 = 0.0, double g0 = 0.0);
  static MappingAnsatz identity(Interval domain, Interval g_domain = {-kInf, kInf});
  static MappingAnsatz numeric_rational(double c, RationalFunction h, Interval domain, double x0 = 0.0,
                                        double g0 = 0.0);

  void validate() const;
};

struct MappingSolution {
  MappingAnsatz ansatz;
  Function g{0.0};
  Function g_prime{0.0};
  RationalFunction g_prime_of_g;  // g' rewritten through g by the ansatz ODE
  Interval domain;
  Interval window;   // finite working window inside the domain
  Interval g_range;  // image of the open domain
  int resolution = 2001;
  // 1 - g and 1 + g in closed forms that stay accurate where g -> +-1;
  // empty when only the plain difference is available.
  std::optional<Function> one_minus_g;
  std::optional<Function> one_plus_g;

  /// sign * (g - root), using the accurate forms for root = +-1.
  Function linear_factor(double root, double sign) const;
};

/// r(g(x)) evaluated as a product of linear factors when all roots of r are
/// real, so that factors vanishing at the ends of the g-range keep full
/// relative accuracy. Falls back to direct composition otherwise.
Function compose_factored(const RationalFunction& r, const MappingSolution& mapping);

/// F_n(g(x)), with the composite prefactor built from the accurate factors.
Function family_in_x(const FamilySpec& spec, const MappingSolution& mapping);

MappingSolution solve_mapping(const MappingAnsatz& ansatz, int resolution = 2001);

enum class MassKind { Unit, ProportionalToGPrime, SechSquared };

struct MassModel {
  MassKind kind = MassKind::Unit;
  double lambda = 1.0;  // ProportionalToGPrime
  double q = 1.0;       // SechSquared

  static MassModel unit() { return {}; }
  static MassModel proportional_to_g_prime(double lambda) { return {MassKind::ProportionalToGPrime, lambda, 1.0}; }
  static MassModel sech_squared(double q) { return {MassKind::SechSquared, 1.0, q}; }

  void validate() const;
  std::string describe() const;
};

Function mass_function(const MassModel& mass, const MappingSolution& mapping);
/// M rewritten as a rational function of g, when the mapping allows it.
std::optional<RationalFunction> mass_in_g(const MassModel& mass, const MappingSolution& mapping);

/// A function with excluded neighbourhoods around its poles; evaluating
/// inside one throws node-error.
struct GuardedFunction {
  Function value{0.0};
  std::vector<double> nodes;
  double radius = 0.0;

  bool excluded(double x) const;
  double operator()(double x) const;
};

/// f = (M/g')^(1/2) exp[(1/2) Int Q(g) dg], up to a positive constant.
Function modulation_factor(const RationalFunction& Q, const MappingSolution& mapping, const MassModel& mass);

/// W = -f' / (sqrt(M) f). `window` is scanned for zeros of f.
Function superpotential(const Function& f, const Function& mass, Interval window);

/// W^2 - (W/sqrt(M))', i.e. V0 - eps.
Function base_potential(const Function& W, const Function& mass);

struct DeltaTerms {
  Function delta_V{0.0};
  double delta_E = 0.0;
  RationalFunction composite;  // -(g'^2/M) R as a reduced rational function of g
  RationalFunction variable;   // the part assigned to Delta V, as a function of g
};

DeltaTerms delta_terms(const RationalFunction& R, const MappingSolution& mapping, const MassModel& mass);

/// x positions of the interior zeros of F_n(g(x)) inside `window`; g must be
/// monotone there.
std::vector<double> level_nodes(const FamilySpec& family, const Function& g, Interval window);

/// Delta W = -F' g' / (sqrt(M) F), guarded around the zeros of F(g(x)).
GuardedFunction delta_superpotential(const FamilySpec& family, const MappingSolution& mapping,
                                     const MassModel& mass);

struct Level {
  int n = 0;
  FamilySpec family;
  Function F{0.0};
  Function delta_V{0.0};
  double delta_E = 0.0;
  double E = 0.0;
  GuardedFunction delta_W;
  Function psi{0.0};  // unit L2 norm over the window
  double norm = 0.0;  // integral of (f F)^2 over the window
  std::vector<double> nodes;
  bool normalizable = true;
  bool borderline = false;

  // Pieces of the level-dependent Riccati identity and of the wave equation.
  Function delta_W_sq{0.0};
  Function delta_W_flux_derivative{0.0};  // (Delta W / sqrt(M))'
  Function cross{0.0};                    // 2 W Delta W
  Function kinetic{0.0};                  // -[(1/M) psi']'
};

struct RejectedLevel {
  int n = 0;
  double alpha = 0.0;
  double E = 0.0;
  std::string reason;
};

struct ConstructedProblem {
  std::string label;
  MassModel mass_model;
  Function mass{1.0};
  MappingSolution mapping;
  Interval domain;
  Interval window;
  Function f{1.0};
  Function W{0.0};
  Function base_minus_eps{0.0};
  double epsilon = 0.0;
  Function V0{0.0};
  std::vector<Level> levels;
  std::vector<RejectedLevel> rejected;

  Function W_sq{0.0};
  Function W_flux_derivative{0.0};  // (W / sqrt(M))'

  Function potential(std::size_t level) const { return V0 + levels.at(level).delta_V; }
};

struct AssembleOptions {
  double epsilon = 0.0;
  std::optional<Interval> window;
  std::string label = "custom";
};

/// One level per family entry; all entries must share Q (hence f and W).
ConstructedProblem assemble_problem(std::span<const FamilySpec> families, const MappingSolution& mapping,
                                    const MassModel& mass, const AssembleOptions& options = {});

/// Fills the identity pieces, nodes, and normalization of every level from
/// the already-set f, W, F, Delta W, mass. Shared by the engine and catalog.
void finalize_problem(ConstructedProblem& problem);

struct RiccatiResiduals {
  double base = 0.0;
  double delta = 0.0;
  double base_scale = 0.0;
  double delta_scale = 0.0;
};

RiccatiResiduals riccati_residuals(const ConstructedProblem& problem, double x, std::size_t level);

struct SampledCoefficients {
  std::vector<double> x;
  std::vector<double> g;
  std::vector<double> Q;
  std::vector<double> R;
};

/// Q and R recovered from (f, g, M, V, E) at the given points.
SampledCoefficients infer_ode_coefficients(const ConstructedProblem& problem, std::size_t level,
                                           std::span<const double> xs);

struct PointResidual {
  double value = 0.0;
  double scale = 0.0;
};

/// -[(1/M) Psi']' + V Psi - E Psi with closed-form (or stencil) derivatives.
PointResidual schrodinger_residual(const ConstructedProblem& problem, std::size_t level, double x);

/// Moves a constant between V0 and eps: V0 += shift, eps += shift, E += shift.
ConstructedProblem shift_split(const ConstructedProblem& problem, double shift);

/// Integral of psi^2 over [lo-ext, lo] and [hi, hi+ext] on the sides where the
/// domain extends past the window.
double tail_beyond_window(const ConstructedProblem& problem, std::size_t level, double extension);

}  // namespace pdm
