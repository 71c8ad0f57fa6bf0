#include "pdm/error.hpp"

namespace pdm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::Parameter: return "parameter-error";
    case ErrorKind::Range: return "range-error";
    case ErrorKind::Singularity: return "singularity-error";
    case ErrorKind::Node: return "node-error";
    case ErrorKind::AnsatzMismatch: return "ansatz-mismatch-error";
    case ErrorKind::MassDegeneracy: return "mass-degeneracy-error";
    case ErrorKind::Convergence: return "convergence-error";
    case ErrorKind::EmptySpectrum: return "empty-spectrum-error";
    case ErrorKind::Config: return "config-error";
    case ErrorKind::Numerical: return "numerical-error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, std::string(to_string(kind)) + ": " + message);
}

}  // namespace pdm
