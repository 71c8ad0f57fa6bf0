#include "pdm/cli/run.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <set>

#include <json.hpp>

#include "pdm/catalog.hpp"
#include "pdm/cli/output.hpp"
#include "pdm/error.hpp"

namespace pdm::cli {

namespace {

using nlohmann::ordered_json;

void check_known(const ProblemConfig& p, const std::set<std::string>& known) {
  for (const auto& [k, _] : p.parameters) {
    if (!known.count(k)) fail(ErrorKind::Config, "problem.parameters: unknown parameter \"" + k + "\" for " + p.id);
  }
}

double param(const ProblemConfig& p, const std::string& name, double fallback) {
  const auto it = p.parameters.find(name);
  return it == p.parameters.end() ? fallback : it->second;
}

int integer_param(const ProblemConfig& p, const std::string& name, int fallback) {
  const double v = param(p, name, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e6) fail(ErrorKind::Config, "problem.parameters." + name + " must be an integer");
  return static_cast<int>(v);
}

ConstructedProblem build_custom(const CustomProblem& c, int levels) {
  std::vector<FamilySpec> families;
  for (int n = 0; n < levels; ++n) families.push_back({c.family, c.alpha, c.beta, n});
  const MappingSolution mapping = solve_mapping(c.ansatz, c.resolution);
  AssembleOptions opts;
  opts.epsilon = c.epsilon;
  opts.window = c.window;
  opts.label = "custom";
  return assemble_problem(families, mapping, c.mass, opts);
}

double eval_or_nan(const Function& f, double x) {
  try {
    return f(x);
  } catch (const Error&) {
    return std::nan("");
  }
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json grid_json(const Grid& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_points", g.n_points}};
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const std::optional<std::string>& from_config) {
  if (flag && !flag->empty()) return *flag;
  if (from_config && !from_config->empty()) return *from_config;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return kDefaultOutputDir;
}

ConstructedProblem build_problem(const ProblemConfig& p) {
  if (p.type == "custom") {
    if (!p.custom) fail(ErrorKind::Config, "problem: custom problem without a specification");
    return build_custom(*p.custom, p.levels);
  }
  if (p.id == "jacobi-pdm") {
    check_known(p, {"q", "alpha", "beta"});
    JacobiPdmParams jp;
    jp.q = param(p, "q", jp.q);
    jp.alpha = param(p, "alpha", jp.alpha);
    jp.beta = param(p, "beta", jp.beta);
    jp.n_max = p.levels - 1;
    return jacobi_pdm(jp);
  }
  if (p.id == "gegenbauer-radial") {
    check_known(p, {"a", "A", "n", "alpha"});
    HulthenFamilyParams hp;
    hp.a = param(p, "a", hp.a);
    const bool family = p.parameters.count("n") || p.parameters.count("alpha");
    if (family && p.parameters.count("A")) {
      fail(ErrorKind::Config, "problem.parameters: give either A (spectrum mode) or n/alpha (family mode), not both");
    }
    if (family) {
      if (!p.parameters.count("alpha")) fail(ErrorKind::Config, "problem.parameters: family mode needs alpha");
      hp.mode = FamilyMode{integer_param(p, "n", 0), param(p, "alpha", 0.0)};
    } else {
      hp.mode = SpectrumMode{param(p, "A", 12.0), p.levels - 1};
    }
    return gegenbauer_radial(hp);
  }
  fail(ErrorKind::Config, "problem.id: unknown catalog entry \"" + p.id + "\" (see list-catalog)");
}

Grid default_grid(const ConstructedProblem& problem) {
  Grid g;
  g.x_min = problem.window.lo;
  g.x_max = problem.window.hi;
  g.n_points = 4001;
  return g;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Parameter:
    case ErrorKind::Domain:
    case ErrorKind::Range:
    case ErrorKind::Singularity:
    case ErrorKind::AnsatzMismatch:
    case ErrorKind::EmptySpectrum:
      return kConfigError;
    case ErrorKind::Node:
    case ErrorKind::MassDegeneracy:
    case ErrorKind::Convergence:
    case ErrorKind::Numerical:
      return kNumericalFailure;
  }
  return kNumericalFailure;
}

int run(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& out,
        std::ostream& err) {
  try {
    return run_config(load_config(config_path), output_dir, out, err);
  } catch (const Error& e) {
    err << "pdmsolve: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

int run_config(const RunConfig& config, const std::optional<std::string>& output_dir, std::ostream& out,
               std::ostream& err) {
  try {
    const ConstructedProblem problem = build_problem(config.problem);
    const Grid grid = config.grid.value_or(default_grid(problem));
    grid.validate();
    const std::filesystem::path dir = resolve_output_dir(output_dir, config.output.directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Config, "cannot create output directory " + dir.string() + ": " + ec.message());

    std::optional<VerificationReport> report;
    if (config.verify.enabled) report = compare_spectra(problem, grid, config.verify.tolerance);

    const double h = grid.step();
    std::vector<double> xs(grid.interior());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = grid.x(static_cast<int>(i) + 1);

    // energies
    std::vector<std::string> header{"n", "E_analytic"};
    if (report) {
      header = {"n", "E_analytic", "E_numeric", "abs_err", "rel_err", "nodes_expected", "nodes_observed", "residual"};
    }
    CsvTable energies(header);
    for (std::size_t i = 0; i < problem.levels.size(); ++i) {
      const Level& L = problem.levels[i];
      if (report) {
        const VerificationRow& r = report->rows[i];
        const double row[] = {double(r.n), r.E_analytic, r.E_numeric, r.abs_err, r.rel_err,
                              double(r.nodes_expected), double(r.nodes_observed), r.residual};
        energies.add_row(row);
      } else {
        const double row[] = {double(L.n), L.E};
        energies.add_row(row);
      }
    }

    // potential and mass; levels share V except for custom families with a level-dependent remainder
    const Function V = problem.levels.empty() ? problem.V0 : problem.potential(0);
    CsvTable potential({"x", "V", "M"});
    std::vector<double> v_samples(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      v_samples[i] = eval_or_nan(V, xs[i]);
      const double row[] = {xs[i], v_samples[i], eval_or_nan(problem.mass, xs[i])};
      potential.add_row(row);
    }

    std::vector<std::vector<double>> psi_a(problem.levels.size()), psi_n(problem.levels.size());
    for (std::size_t i = 0; i < problem.levels.size(); ++i) {
      psi_a[i].resize(xs.size());
      for (std::size_t k = 0; k < xs.size(); ++k) psi_a[i][k] = eval_or_nan(problem.levels[i].psi, xs[k]);
      if (report && std::isfinite(report->rows[i].E_numeric)) {
        const DiscreteHamiltonian H = discretize_hamiltonian(problem.mass, problem.potential(i), grid);
        std::vector<double> v = eigenvector_for(H, report->rows[i].E_numeric);
        double overlap = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (std::isfinite(psi_a[i][k])) overlap += v[k] * psi_a[i][k];
        }
        const double scale = (overlap < 0.0 ? -1.0 : 1.0) / std::sqrt(h);
        for (double& e : v) e *= scale;
        psi_n[i] = std::move(v);
      }
    }

    if (config.output.wants("csv")) {
      write_atomic(dir / "energies.csv", energies.str());
      write_atomic(dir / "potential.csv", potential.str());
      for (std::size_t i = 0; i < problem.levels.size(); ++i) {
        const bool numeric = !psi_n[i].empty();
        CsvTable t(numeric ? std::vector<std::string>{"x", "psi_analytic", "psi_numeric"}
                           : std::vector<std::string>{"x", "psi_analytic"});
        for (std::size_t k = 0; k < xs.size(); ++k) {
          if (numeric) {
            const double row[] = {xs[k], psi_a[i][k], psi_n[i][k]};
            t.add_row(row);
          } else {
            const double row[] = {xs[k], psi_a[i][k]};
            t.add_row(row);
          }
        }
        write_atomic(dir / ("psi_" + std::to_string(problem.levels[i].n) + ".csv"), t.str());
      }
    }

    if (config.output.wants("json")) {
      ordered_json j;
      j["problem"] = problem.label;
      j["mass"] = problem.mass_model.describe();
      j["window"] = {problem.window.lo, problem.window.hi};
      j["epsilon"] = problem.epsilon;
      ordered_json levels = ordered_json::array();
      for (const Level& L : problem.levels) {
        levels.push_back({{"n", L.n},
                          {"family", L.family.describe()},
                          {"E", L.E},
                          {"delta_E", L.delta_E},
                          {"nodes", L.nodes},
                          {"normalizable", L.normalizable},
                          {"borderline", L.borderline}});
      }
      j["levels"] = levels;
      ordered_json rejected = ordered_json::array();
      for (const RejectedLevel& r : problem.rejected) {
        rejected.push_back({{"n", r.n}, {"alpha", r.alpha}, {"E", r.E}, {"reason", r.reason}});
      }
      j["rejected"] = rejected;
      if (report) {
        ordered_json rows = ordered_json::array();
        for (const VerificationRow& r : report->rows) {
          rows.push_back({{"n", r.n},
                          {"E_analytic", r.E_analytic},
                          {"E_numeric", number_or_null(r.E_numeric)},
                          {"abs_err", number_or_null(r.abs_err)},
                          {"rel_err", number_or_null(r.rel_err)},
                          {"nodes_expected", r.nodes_expected},
                          {"nodes_observed", r.nodes_observed},
                          {"residual", number_or_null(r.residual)},
                          {"passed", r.passed}});
        }
        j["verification"] = {{"enabled", true},
                             {"passed", report->passed},
                             {"tolerance", report->tolerance},
                             {"orthogonality_defect", report->orthogonality_defect},
                             {"grid", grid_json(report->grid)},
                             {"rows", rows}};
      } else {
        j["verification"] = {{"enabled", false}, {"grid", grid_json(grid)}};
      }
      write_atomic(dir / "report.json", j.dump(2) + "\n");
    }

    if (config.output.wants("svg")) {
      write_atomic(dir / "potential.svg", svg_plot("Potential and mass", "x", "V(x), M(x)",
                                                   {{"V", xs, v_samples}, {"M", xs, [&] {
                                                      std::vector<double> m(xs.size());
                                                      for (std::size_t k = 0; k < xs.size(); ++k)
                                                        m[k] = eval_or_nan(problem.mass, xs[k]);
                                                      return m;
                                                    }()}}));
      std::vector<PlotSeries> waves;
      for (std::size_t i = 0; i < problem.levels.size(); ++i) {
        waves.push_back({"psi_" + std::to_string(problem.levels[i].n), xs, psi_a[i]});
        if (!psi_n[i].empty()) waves.push_back({"psi_" + std::to_string(problem.levels[i].n) + " (numeric)", xs, psi_n[i]});
      }
      write_atomic(dir / "wavefunctions.svg", svg_plot("Wavefunctions", "x", "psi(x)", waves));
    }

    out << problem.label << ": " << problem.levels.size() << " level(s), output in " << dir.string() << '\n';
    for (std::size_t i = 0; i < problem.levels.size(); ++i) {
      out << "  n=" << problem.levels[i].n << "  E=" << format_double(problem.levels[i].E);
      if (report) {
        const auto& r = report->rows[i];
        out << "  E_numeric=" << format_double(r.E_numeric) << "  rel_err=" << format_double(r.rel_err)
            << (r.passed ? "  ok" : "  FAILED");
      }
      out << '\n';
    }
    for (const RejectedLevel& r : problem.rejected) out << "  n=" << r.n << " rejected: " << r.reason << '\n';
    if (report && !report->passed) {
      err << "pdmsolve: verification failed at tolerance " << format_double(report->tolerance) << '\n';
      return kVerificationFailed;
    }
    return kSuccess;
  } catch (const Error& e) {
    err << "pdmsolve: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "pdmsolve: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

void list_catalog(std::ostream& out) {
  for (const CatalogEntry& e : catalog_entries()) {
    out << e.id << "\n  " << e.summary << "\n  mapping: " << e.mapping << "\n  mass: " << e.mass << '\n';
    for (const CatalogParameter& p : e.parameters) out << "  " << p.name << ": " << p.constraint << '\n';
  }
}

int calibrate(std::ostream& out) {
  bool ok = true;
  for (const CalibrationCase& c : pdm::calibrate()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  expected=" << format_double(c.expected)
        << "  observed=" << format_double(c.observed) << "  rel_err=" << format_double(c.rel_err) << '\n';
    ok = ok && c.passed;
  }
  return ok ? kSuccess : kVerificationFailed;
}

}  // namespace pdm::cli
