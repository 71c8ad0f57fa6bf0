#include "pdm/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdm/error.hpp"

namespace pdm::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorKind::Config, where + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where, "missing key \"" + key + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(where, "expected a finite number");
  return d;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get<std::string>();
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      bad(where, "unknown key \"" + key + "\"");
    }
  }
}

// [lo, hi] with null for an infinite end
Interval interval(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) bad(where, "expected [lo, hi]");
  const double lo = v[0].is_null() ? -kInf : number(v[0], where + "[0]");
  const double hi = v[1].is_null() ? kInf : number(v[1], where + "[1]");
  if (!(hi > lo)) bad(where, "expected lo < hi");
  return {lo, hi};
}

Polynomial coefficients(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) bad(where, "expected a nonempty coefficient array");
  std::vector<double> c;
  for (std::size_t i = 0; i < v.size(); ++i) c.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return Polynomial(std::move(c));
}

CustomProblem parse_custom(const json& p) {
  CustomProblem c;
  const json& fam = require(p, "family", "problem");
  only_keys(fam, {"kind", "alpha", "beta"}, "problem.family");
  const std::string kind = text(require(fam, "kind", "problem.family"), "problem.family.kind");
  if (kind == "jacobi") c.family = FamilyKind::Jacobi;
  else if (kind == "gegenbauer") c.family = FamilyKind::Gegenbauer;
  else if (kind == "gen-laguerre") c.family = FamilyKind::GenLaguerre;
  else if (kind == "gegenbauer-composite") c.family = FamilyKind::GegenbauerComposite;
  else bad("problem.family.kind", "unknown family \"" + kind + "\"");
  if (fam.contains("alpha")) c.alpha = number(fam["alpha"], "problem.family.alpha");
  if (fam.contains("beta")) c.beta = number(fam["beta"], "problem.family.beta");

  const json& an = require(p, "ansatz", "problem");
  only_keys(an, {"kind", "rate", "x0", "g0", "domain", "g_domain", "shape", "resolution"}, "problem.ansatz");
  const std::string ak = text(require(an, "kind", "problem.ansatz"), "problem.ansatz.kind");
  const double rate = an.contains("rate") ? number(an["rate"], "problem.ansatz.rate") : 1.0;
  const double x0 = an.contains("x0") ? number(an["x0"], "problem.ansatz.x0") : 0.0;
  const double g0 = an.contains("g0") ? number(an["g0"], "problem.ansatz.g0") : 0.0;
  if (ak == "tanh") {
    c.ansatz = MappingAnsatz::tanh_branch(rate, {-kInf, kInf}, x0, g0);
  } else if (ak == "sqrt-exp") {
    c.ansatz = MappingAnsatz::sqrt_exp_branch(rate, {0.0, kInf}, x0, g0);
  } else if (ak == "identity") {
    c.ansatz = MappingAnsatz::identity({-1.0, 1.0}, {-kInf, kInf});
  } else if (ak == "numeric") {
    const json& sh = require(an, "shape", "problem.ansatz");
    only_keys(sh, {"numerator", "denominator"}, "problem.ansatz.shape");
    const Polynomial num = coefficients(require(sh, "numerator", "problem.ansatz.shape"), "problem.ansatz.shape.numerator");
    const Polynomial den = sh.contains("denominator") ? coefficients(sh["denominator"], "problem.ansatz.shape.denominator")
                                                      : Polynomial(1.0);
    if (den.is_zero()) bad("problem.ansatz.shape.denominator", "must not be the zero polynomial");
    c.ansatz = MappingAnsatz::numeric_rational(rate, RationalFunction(num, den), {-1.0, 1.0}, x0, g0);
  } else {
    bad("problem.ansatz.kind", "unknown ansatz \"" + ak + "\"");
  }
  if (an.contains("domain")) c.ansatz.domain = interval(an["domain"], "problem.ansatz.domain");
  if (an.contains("g_domain")) c.ansatz.g_domain = interval(an["g_domain"], "problem.ansatz.g_domain");
  if (ak == "identity") {
    c.ansatz.x0 = std::isfinite(c.ansatz.domain.lo) && std::isfinite(c.ansatz.domain.hi) ? c.ansatz.domain.mid() : 0.0;
    c.ansatz.g0 = c.ansatz.x0;
  }
  if (an.contains("resolution")) c.resolution = integer(an["resolution"], "problem.ansatz.resolution");

  if (p.contains("mass")) {
    const json& m = p["mass"];
    only_keys(m, {"kind", "lambda", "q"}, "problem.mass");
    const std::string mk = text(require(m, "kind", "problem.mass"), "problem.mass.kind");
    if (mk == "unit") c.mass = MassModel::unit();
    else if (mk == "proportional") c.mass = MassModel::proportional_to_g_prime(number(require(m, "lambda", "problem.mass"), "problem.mass.lambda"));
    else if (mk == "sech2") c.mass = MassModel::sech_squared(number(require(m, "q", "problem.mass"), "problem.mass.q"));
    else bad("problem.mass.kind", "unknown mass model \"" + mk + "\"");
  }
  if (p.contains("epsilon")) c.epsilon = number(p["epsilon"], "problem.epsilon");
  if (p.contains("window")) c.window = interval(p["window"], "problem.window");
  return c;
}

}  // namespace

bool OutputConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(doc, {"problem", "grid", "verify", "output"}, "config");

  RunConfig cfg;
  const json& p = require(doc, "problem", "config");
  cfg.problem.type = text(require(p, "type", "problem"), "problem.type");
  if (p.contains("levels")) cfg.problem.levels = integer(p["levels"], "problem.levels");
  if (cfg.problem.levels < 1) bad("problem.levels", "must be >= 1");
  if (cfg.problem.type == "catalog") {
    only_keys(p, {"type", "id", "parameters", "levels"}, "problem");
    cfg.problem.id = text(require(p, "id", "problem"), "problem.id");
    if (p.contains("parameters")) {
      const json& params = p["parameters"];
      if (!params.is_object()) bad("problem.parameters", "expected an object");
      for (const auto& [k, v] : params.items()) cfg.problem.parameters[k] = number(v, "problem.parameters." + k);
    }
  } else if (cfg.problem.type == "custom") {
    only_keys(p, {"type", "family", "ansatz", "mass", "epsilon", "window", "levels"}, "problem");
    cfg.problem.custom = parse_custom(p);
  } else {
    bad("problem.type", "expected \"catalog\" or \"custom\"");
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    only_keys(g, {"x_min", "x_max", "n_points"}, "grid");
    Grid grid;
    grid.x_min = number(require(g, "x_min", "grid"), "grid.x_min");
    grid.x_max = number(require(g, "x_max", "grid"), "grid.x_max");
    grid.n_points = integer(require(g, "n_points", "grid"), "grid.n_points");
    if (!(grid.x_max > grid.x_min)) bad("grid", "x_max > x_min violated");
    if (grid.n_points < 3) bad("grid.n_points", "n_points >= 3 violated");
    cfg.grid = grid;
  }

  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    only_keys(v, {"enabled", "tolerance"}, "verify");
    if (v.contains("enabled")) {
      if (!v["enabled"].is_boolean()) bad("verify.enabled", "expected true or false");
      cfg.verify.enabled = v["enabled"].get<bool>();
    }
    if (v.contains("tolerance")) cfg.verify.tolerance = number(v["tolerance"], "verify.tolerance");
    if (!(cfg.verify.tolerance > 0.0)) bad("verify.tolerance", "tolerance > 0 violated");
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    only_keys(o, {"directory", "formats"}, "output");
    if (o.contains("directory")) cfg.output.directory = text(o["directory"], "output.directory");
    if (o.contains("formats")) {
      const json& f = o["formats"];
      if (!f.is_array() || f.empty()) bad("output.formats", "expected a nonempty array");
      cfg.output.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string s = text(f[i], "output.formats[" + std::to_string(i) + "]");
        if (s != "csv" && s != "json" && s != "svg") bad("output.formats", "unknown format \"" + s + "\"");
        if (!cfg.output.wants(s)) cfg.output.formats.push_back(s);
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pdm::cli
