#pragma once

#include <span>

#include "pdm/construct.hpp"

// The M = 1 specialization written out on its own: no mass function, no
// sqrt(M) factors, textbook W = -f'/f and V0 - eps = W^2 - W'. Used as an
// independent check on the general code path.
namespace pdm::constant_mass {

Function modulation_factor(const RationalFunction& Q, const MappingSolution& mapping);
Function superpotential(const Function& f);
Function base_potential(const Function& W);
DeltaTerms delta_terms(const RationalFunction& R, const MappingSolution& mapping);
Function delta_superpotential(const FamilySpec& family, const MappingSolution& mapping);

ConstructedProblem assemble(std::span<const FamilySpec> families, const MappingSolution& mapping,
                            const AssembleOptions& options = {});

}  // namespace pdm::constant_mass
