#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdm/construct.hpp"
#include "pdm/verify.hpp"

namespace pdm::cli {

/// Generic-engine problem: one family, one mapping ansatz, one mass model;
/// levels n = 0..levels-1 share the family parameters.
struct CustomProblem {
  FamilyKind family = FamilyKind::Jacobi;
  double alpha = 0.0;
  double beta = 0.0;
  MappingAnsatz ansatz;
  int resolution = 2001;
  MassModel mass;
  double epsilon = 0.0;
  std::optional<Interval> window;
};

struct ProblemConfig {
  std::string type = "catalog";  // "catalog" | "custom"
  std::string id;
  std::map<std::string, double> parameters;
  int levels = 1;
  std::optional<CustomProblem> custom;
};

struct VerifyConfig {
  bool enabled = false;
  double tolerance = 1e-3;
};

struct OutputConfig {
  std::optional<std::string> directory;
  std::vector<std::string> formats{"csv", "json"};

  bool wants(const std::string& format) const;
};

struct RunConfig {
  ProblemConfig problem;
  std::optional<Grid> grid;
  VerifyConfig verify;
  OutputConfig output;
};

/// Throws config-error with a path to the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace pdm::cli
