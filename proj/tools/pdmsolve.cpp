#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pdm/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exactly solvable position-dependent-mass Schrodinger problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  auto* run = app.add_subcommand("run", "Build a problem from a JSON config, write tables and optionally verify");
  run->add_option("config", config_path, "Path to the JSON config")->required();
  run->add_option("--output-dir", output_dir, "Output directory (overrides config and PDMSOLVE_OUTPUT_DIR)");

  auto* list = app.add_subcommand("list-catalog", "List the built-in problems and their parameters");
  auto* cal = app.add_subcommand("calibrate", "Run the box and harmonic-oscillator sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // usage errors are configuration errors in the exit-code contract
    return rc == 0 ? 0 : pdm::cli::kConfigError;
  }

  if (*run) return pdm::cli::run(config_path, output_dir, std::cout, std::cerr);
  if (*list) {
    pdm::cli::list_catalog(std::cout);
    return 0;
  }
  if (*cal) return pdm::cli::calibrate(std::cout);
  return pdm::cli::kConfigError;
}
