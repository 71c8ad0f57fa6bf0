#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pdm/cli/config.hpp"
#include "pdm/error.hpp"

namespace pdm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

inline constexpr const char* kOutputDirEnv = "PDMSOLVE_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "pdmsolve-output";

/// Flag, then config, then environment, then the built-in default.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const std::optional<std::string>& from_config);

ConstructedProblem build_problem(const ProblemConfig& problem);

/// Grid used for tables and verification when the config has none.
Grid default_grid(const ConstructedProblem& problem);

int exit_code_for(ErrorKind kind);

int run(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& out,
        std::ostream& err);
int run_config(const RunConfig& config, const std::optional<std::string>& output_dir, std::ostream& out,
               std::ostream& err);
void list_catalog(std::ostream& out);
int calibrate(std::ostream& out);

}  // namespace pdm::cli
