#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pdm/construct.hpp"

namespace pdm {

/// Jacobi seed on g = tanh(qx) with M = sech^2(qx).
struct JacobiPdmParams {
  double q = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  int n_max = 0;

  void validate() const;
};

/// Gegenbauer-composite seed on g = [1 - exp(2ar)]^(1/2), M = 1, r > 0.
struct FamilyMode {
  int n = 0;
  double alpha = 0.0;
};

/// Fixes the potential by A and lets alpha follow n.
struct SpectrumMode {
  double A = 12.0;
  int n_max = 0;
};

struct HulthenFamilyParams {
  double a = -1.0;
  std::variant<FamilyMode, SpectrumMode> mode = SpectrumMode{};

  void validate() const;
};

ConstructedProblem jacobi_pdm(const JacobiPdmParams& params);
/// FamilyMode: one level. SpectrumMode is forwarded to hulthen_spectrum.
ConstructedProblem gegenbauer_radial(const HulthenFamilyParams& params);
ConstructedProblem hulthen_spectrum(const HulthenFamilyParams& params);

/// Working window |qx| <= acosh(1e5)/q, where sech^2(qx) >= 1e-10.
Interval jacobi_window(double q);
/// (0, r_max) for the radial family; r_max is the larger of the potential
/// saturation radius and the wavefunction tail radius for the slowest level.
Interval radial_window(double a, double A, double alpha_min);

double hulthen_A(int n, double alpha);
double spectrum_alpha(double A, int n);
/// The radial potential written through g, and through exp(-2ar).
Function hulthen_potential_in_g(double a, double A);
Function hulthen_potential_in_exp(double a, double A);
double hulthen_potential_limit(double a, double A);

/// Inputs that make the generic pipeline reproduce a catalog problem.
struct EngineInputs {
  std::vector<FamilySpec> families;
  MappingSolution mapping;
  MassModel mass;
  AssembleOptions options;
};

EngineInputs jacobi_pdm_engine_inputs(const JacobiPdmParams& params);
EngineInputs gegenbauer_radial_engine_inputs(const HulthenFamilyParams& params);

struct CatalogParameter {
  std::string name;
  std::string constraint;
};

struct CatalogEntry {
  std::string id;
  std::string summary;
  std::string mapping;
  std::string mass;
  std::vector<CatalogParameter> parameters;
};

const std::vector<CatalogEntry>& catalog_entries();

}  // namespace pdm
