#include "gpe/error.hpp"

namespace gpe {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDomain: return "invalid-domain";
    case ErrorKind::MeshMismatch: return "mesh-mismatch";
    case ErrorKind::NearSingular: return "near-singular";
    case ErrorKind::NegativePotential: return "negative-potential";
    case ErrorKind::NotNormalized: return "not-normalized";
    case ErrorKind::ShiftEqualsLambda: return "shift-equals-lambda";
    case ErrorKind::NonpositiveGamma: return "nonpositive-gamma";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::MaxIterExceeded: return "max-iter-exceeded";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ValidationError: return "validation-error";
  }
  return "unknown";
}

}  // namespace gpe
