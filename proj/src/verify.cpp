#include "pdm/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "pdm/error.hpp"
#include "pdm/kernels.hpp"

namespace pdm {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct SturmData {
  std::vector<double> off_sq;
  double pivmin = 0.0;
};

SturmData sturm_data(const DiscreteHamiltonian& H) {
  SturmData s;
  s.off_sq.resize(H.off.size());
  double emax = 1.0;
  for (std::size_t i = 0; i < H.off.size(); ++i) {
    s.off_sq[i] = H.off[i] * H.off[i];
    emax = std::max(emax, s.off_sq[i]);
  }
  s.pivmin = std::numeric_limits<double>::min() * emax;
  return s;
}

std::array<std::int64_t, kernels::kShiftLanes> counts_at(const DiscreteHamiltonian& H, const SturmData& s,
                                                          const std::array<double, kernels::kShiftLanes>& shifts) {
  std::array<std::int64_t, kernels::kShiftLanes> c{};
  kernels::sturm_counts(H.diag, s.off_sq, shifts, s.pivmin, c);
  return c;
}

// Gershgorin interval.
std::pair<double, double> spectrum_bounds(const DiscreteHamiltonian& H) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = H.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(H.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(H.off[i]) : 0.0);
    lo = std::min(lo, H.diag[i] - r);
    hi = std::max(hi, H.diag[i] + r);
  }
  const double pad = 1e-12 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

// Banded LU with partial pivoting of T - shift (LAPACK gttrf/gttrs layout).
struct TridiagLU {
  std::vector<double> dl, d, du, du2;
  std::vector<char> swapped;

  TridiagLU(const DiscreteHamiltonian& H, double shift, double tiny) {
    const std::size_t n = H.size();
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = H.diag[i] - shift;
    dl = H.off;
    du = H.off;
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 0 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = tiny;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (n > 0 && d[n - 1] == 0.0) d[n - 1] = tiny;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      const std::size_t i = k - 2;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  }
};

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

double safe_eval(const Function& f, double x) {
  try {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  } catch (const Error&) {
    return 0.0;
  }
}

bool same_potential(const Function& a, const Function& b, const Grid& grid) {
  for (int k = 1; k <= 16; ++k) {
    const double x = grid.x_min + (grid.x_max - grid.x_min) * (k - 0.5) / 16.0;
    const double va = a(x);
    const double vb = b(x);
    if (std::abs(va - vb) > 1e-12 * std::max(1.0, std::abs(va))) return false;
  }
  return true;
}

}  // namespace

void Grid::validate() const {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    fail(ErrorKind::Parameter, "grid needs finite x_min < x_max");
  }
  if (n_points < 3) fail(ErrorKind::Parameter, "grid needs n_points >= 3");
}

double DiscreteHamiltonian::norm() const {
  double m = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r =
        std::abs(diag[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    m = std::max(m, r);
  }
  return m;
}

std::vector<double> DiscreteHamiltonian::apply(std::span<const double> v, double shift) const {
  std::vector<double> y(size());
  kernels::tridiag_shifted_apply(diag, off, v, shift, y);
  return y;
}

DiscreteHamiltonian discretize_hamiltonian(const Function& mass, const Function& potential, const Grid& grid,
                                           double m_min) {
  grid.validate();
  const int N = grid.n_points;
  const double h = grid.step();
  const double h2 = h * h;

  // inverse mass at the N-1 half points x_{i+1/2}, i = 0..N-2
  std::vector<double> inv_m(static_cast<std::size_t>(N - 1));
  std::vector<double> bad;
  for (int i = 0; i + 1 < N; ++i) {
    const double xm = grid.x_min + (i + 0.5) * h;
    const double M = mass(xm);
    if (!(M > m_min)) bad.push_back(xm);
    inv_m[static_cast<std::size_t>(i)] = 1.0 / M;
  }
  if (!bad.empty()) {
    // Suggest the largest run of good half points around the grid centre.
    const double mid = 0.5 * (grid.x_min + grid.x_max);
    double lo = grid.x_min;
    double hi = grid.x_max;
    for (double b : bad) {
      if (b <= mid) lo = std::max(lo, b + h);
      if (b >= mid) hi = std::min(hi, b - h);
    }
    std::string msg = "M <= " + num(m_min) + " at " + std::to_string(bad.size()) + " half-grid point(s), first at x = " +
                      num(bad.front());
    if (hi > lo) msg += "; shrink the domain to [" + num(lo) + ", " + num(hi) + "]";
    fail(ErrorKind::MassDegeneracy, msg);
  }

  DiscreteHamiltonian H;
  H.grid = grid;
  const std::size_t n = grid.interior();
  H.diag.resize(n);
  H.off.resize(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.x(static_cast<int>(k) + 1);
    const double V = potential(x);
    if (!std::isfinite(V)) fail(ErrorKind::Domain, "potential is not finite at x = " + num(x));
    H.diag[k] = (inv_m[k] + inv_m[k + 1]) / h2 + V;
    if (k + 1 < n) H.off[k] = -inv_m[k + 1] / h2;
  }
  H.left_coupling = -inv_m.front() / h2;
  H.right_coupling = -inv_m.back() / h2;
  return H;
}

std::size_t sturm_count(const DiscreteHamiltonian& H, double shift) {
  const SturmData s = sturm_data(H);
  const auto c = counts_at(H, s, {shift, shift, shift, shift});
  return static_cast<std::size_t>(c[0]);
}

std::vector<double> eigen_lowest(const DiscreteHamiltonian& H, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > H.size()) {
    fail(ErrorKind::Parameter, "eigen_lowest: k = " + std::to_string(k) + " outside 1.." + std::to_string(H.size()));
  }
  const SturmData s = sturm_data(H);
  const auto [glo, ghi] = spectrum_bounds(H);
  constexpr std::size_t L = kernels::kShiftLanes;

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  double floor_lo = glo;
  for (int j = 0; j < k; ++j) {
    // count(a) <= j < count(b)
    double a = floor_lo;
    double b = ghi;
    for (int it = 0; it < 400; ++it) {
      const double width = b - a;
      if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) ||
          width <= 4.0 * s.pivmin) {
        break;
      }
      std::array<double, L> shifts{};
      for (std::size_t m = 0; m < L; ++m) shifts[m] = a + width * static_cast<double>(m + 1) / (L + 1);
      const auto c = counts_at(H, s, shifts);
      double na = a;
      double nb = b;
      for (std::size_t m = 0; m < L; ++m) {
        if (c[m] <= j) na = std::max(na, shifts[m]);
        else nb = std::min(nb, shifts[m]);
      }
      if (na == a && nb == b) break;
      a = na;
      b = nb;
    }
    out.push_back(0.5 * (a + b));
    floor_lo = a;
  }
  return out;
}

std::vector<double> eigenvector_for(const DiscreteHamiltonian& H, double E) {
  const std::size_t n = H.size();
  const double scale = std::max(H.norm(), 1e-300);
  const TridiagLU lu(H, E, std::numeric_limits<double>::epsilon() * scale);

  std::vector<double> v(n);
  // deterministic start with components along every mode
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  double res = 0.0;
  for (int it = 0; it < 12; ++it) {
    lu.solve(v);
    const double nv = norm2(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) fail(ErrorKind::Convergence, "inverse iteration broke down at E = " + num(E));
    for (double& x : v) x /= nv;
    const std::vector<double> r = H.apply(v, E);
    res = norm2(r);
    if (it >= 2 && res <= 1e-8 * scale) {
      double vmax = 0.0;
      for (double x : v) vmax = std::max(vmax, std::abs(x));
      for (double x : v) {
        if (std::abs(x) > 1e-3 * vmax) {
          if (x < 0.0) {
            for (double& y : v) y = -y;
          }
          break;
        }
      }
      return v;
    }
  }
  fail(ErrorKind::Convergence, "inverse iteration did not converge at E = " + num(E) + " (residual " + num(res) + ")");
}

double operator_residual(const DiscreteHamiltonian& H, std::span<const double> psi, double E,
                         std::optional<BoundaryValues> boundary) {
  if (psi.size() != H.size()) fail(ErrorKind::Parameter, "operator_residual: sample count does not match the grid");
  const double nv = norm2(psi);
  if (!(nv > 0.0)) return 0.0;
  std::vector<double> r = H.apply(psi, E);
  if (boundary) {
    r.front() += H.left_coupling * boundary->left;
    r.back() += H.right_coupling * boundary->right;
  }
  return norm2(r) / nv / std::max(1.0, std::abs(E));
}

int count_nodes(std::span<const double> psi) {
  double m = 0.0;
  for (double v : psi) m = std::max(m, std::abs(v));
  const double floor = 1e-12 * m;
  int nodes = 0;
  int last = 0;
  for (double v : psi) {
    if (std::abs(v) < floor || v == 0.0) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

std::vector<double> sample_interior(const Function& psi, const Grid& grid) {
  std::vector<double> out(grid.interior());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = psi(grid.x(static_cast<int>(k) + 1));
  return out;
}

VerificationReport compare_spectra(const ConstructedProblem& problem, const Grid& grid, double tol) {
  grid.validate();
  if (!(tol > 0.0)) fail(ErrorKind::Parameter, "verification tolerance must be positive");
  VerificationReport report;
  report.grid = grid;
  report.tolerance = tol;
  report.rejected = problem.rejected;
  if (problem.levels.empty()) return report;

  struct Operator {
    std::size_t potential_of;
    DiscreteHamiltonian H;
    std::vector<double> eigenvalues;
  };
  std::vector<Operator> ops;
  std::vector<std::size_t> op_of(problem.levels.size());
  std::vector<std::vector<double>> samples(problem.levels.size());
  std::vector<int> expected(problem.levels.size());

  for (std::size_t i = 0; i < problem.levels.size(); ++i) {
    samples[i] = sample_interior(problem.levels[i].psi, grid);
    expected[i] = count_nodes(samples[i]);
    const Function V = problem.potential(i);
    std::size_t found = ops.size();
    for (std::size_t o = 0; o < ops.size(); ++o) {
      if (same_potential(problem.potential(ops[o].potential_of), V, grid)) {
        found = o;
        break;
      }
    }
    if (found == ops.size()) ops.push_back({i, discretize_hamiltonian(problem.mass, V, grid), {}});
    op_of[i] = found;
  }
  for (std::size_t o = 0; o < ops.size(); ++o) {
    int need = 0;
    for (std::size_t i = 0; i < problem.levels.size(); ++i) {
      if (op_of[i] == o) need = std::max(need, expected[i] + 1);
    }
    need = std::min<int>(need, static_cast<int>(ops[o].H.size()));
    ops[o].eigenvalues = eigen_lowest(ops[o].H, need);
  }

  bool all = true;
  for (std::size_t i = 0; i < problem.levels.size(); ++i) {
    const Level& L = problem.levels[i];
    const Operator& op = ops[op_of[i]];
    VerificationRow row;
    row.n = L.n;
    row.E_analytic = L.E;
    row.nodes_expected = expected[i];
    const auto m = static_cast<std::size_t>(expected[i]);
    if (m < op.eigenvalues.size()) {
      row.E_numeric = op.eigenvalues[m];
      row.nodes_observed = count_nodes(eigenvector_for(op.H, row.E_numeric));
    } else {
      row.E_numeric = std::numeric_limits<double>::quiet_NaN();
      row.nodes_observed = -1;
    }
    row.abs_err = std::abs(row.E_numeric - row.E_analytic);
    row.rel_err = row.abs_err / std::max(std::abs(row.E_analytic), std::numeric_limits<double>::min());
    const BoundaryValues bv{safe_eval(L.psi, grid.x_min), safe_eval(L.psi, grid.x_max)};
    row.residual = operator_residual(op.H, samples[i], L.E, bv);
    row.passed = row.rel_err <= tol && row.nodes_expected == row.nodes_observed;
    all = all && row.passed;
    report.rows.push_back(row);
  }

  // trapezoid over all grid nodes, ends included
  const double h = grid.step();
  std::vector<std::vector<double>> full(problem.levels.size());
  for (std::size_t i = 0; i < problem.levels.size(); ++i) {
    full[i].reserve(static_cast<std::size_t>(grid.n_points));
    full[i].push_back(safe_eval(problem.levels[i].psi, grid.x_min));
    full[i].insert(full[i].end(), samples[i].begin(), samples[i].end());
    full[i].push_back(safe_eval(problem.levels[i].psi, grid.x_max));
  }
  for (std::size_t i = 0; i < full.size(); ++i) {
    for (std::size_t j = i + 1; j < full.size(); ++j) {
      double s = kernels::dot(full[i], full[j]);
      s -= 0.5 * (full[i].front() * full[j].front() + full[i].back() * full[j].back());
      report.orthogonality_defect = std::max(report.orthogonality_defect, std::abs(s * h));
    }
  }
  report.passed = all;
  return report;
}

ConstructedProblem harmonic_sanity_problem(int n_max) {
  if (n_max < 0) fail(ErrorKind::Parameter, "n_max >= 0 violated");
  const Expr x = Expr::variable();
  ConstructedProblem p;
  p.label = "harmonic";
  p.mass_model = MassModel::unit();
  p.mass = Function(1.0);
  p.mapping = solve_mapping(MappingAnsatz::identity({-kInf, kInf}));
  p.domain = p.mapping.domain;
  p.window = {-12.0, 12.0};
  p.mapping.window = p.window;
  p.f = Function(exp(-0.5 * x * x));
  p.W = Function(x);
  p.epsilon = 1.0;
  p.V0 = Function(x * x);
  p.base_minus_eps = Function(x * x - 1.0);

  // physicists' Hermite polynomials
  Polynomial prev(1.0);
  Polynomial cur = Polynomial(std::vector<double>{0.0, 2.0});
  for (int n = 0; n <= n_max; ++n) {
    const Polynomial H = n == 0 ? prev : cur;
    Level level;
    level.n = n;
    level.family.degree = n;
    level.F = Function(apply(RationalFunction(H), x));
    level.delta_V = Function(0.0);
    level.delta_E = 2.0 * n;
    level.E = 2.0 * n + 1.0;
    level.delta_W.radius = 1e-3 * p.window.width();
    if (n > 0) {
      level.delta_W.value = Function(-apply(RationalFunction(H.derivative(), H), x));
      level.delta_W.nodes = find_zeros(level.F, p.window);
    }
    p.levels.push_back(std::move(level));
    if (n >= 1) {
      const Polynomial next = Polynomial(std::vector<double>{0.0, 2.0}) * cur - (2.0 * n) * prev;
      prev = cur;
      cur = next;
    }
  }
  finalize_problem(p);
  return p;
}

std::vector<CalibrationCase> calibrate(double tolerance) {
  std::vector<CalibrationCase> out;
  const double pi = std::acos(-1.0);
  {
    const Grid grid{0.0, 1.0, 2001};
    const auto H = discretize_hamiltonian(Function(1.0), Function(0.0), grid);
    const auto E = eigen_lowest(H, 3);
    for (int k = 1; k <= 3; ++k) {
      CalibrationCase c;
      c.name = "box E_" + std::to_string(k) + " vs (" + std::to_string(k) + " pi)^2";
      c.expected = (k * pi) * (k * pi);
      c.observed = E[static_cast<std::size_t>(k - 1)];
      c.rel_err = std::abs(c.observed - c.expected) / c.expected;
      c.tolerance = tolerance;
      c.passed = c.rel_err <= tolerance;
      out.push_back(c);
    }
  }
  {
    const Grid grid{-10.0, 10.0, 4001};
    const Expr x = Expr::variable();
    const auto H = discretize_hamiltonian(Function(1.0), Function(x * x), grid);
    const auto E = eigen_lowest(H, 4);
    for (int n = 0; n <= 3; ++n) {
      CalibrationCase c;
      c.name = "harmonic E_" + std::to_string(n) + " vs " + std::to_string(2 * n + 1);
      c.expected = 2.0 * n + 1.0;
      c.observed = E[static_cast<std::size_t>(n)];
      c.rel_err = std::abs(c.observed - c.expected) / c.expected;
      c.tolerance = tolerance;
      c.passed = c.rel_err <= tolerance;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace pdm
