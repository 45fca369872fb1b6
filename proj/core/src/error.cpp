#include "sdpkit/error.hpp"

namespace sdpkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalTrouble: return "NumericalTrouble";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::UnsupportedSize: return "UnsupportedSize";
    case ErrorKind::LeadingBlockNotPd: return "LeadingBlockNotPd";
    case ErrorKind::InfeasibleLinearSystem: return "InfeasibleLinearSystem";
    case ErrorKind::DependentConstraintMatrices: return "DependentConstraintMatrices";
    case ErrorKind::VariableCountMismatch: return "VariableCountMismatch";
    case ErrorKind::InfeasibleArgument: return "InfeasibleArgument";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::FactorizationFailure: return "FactorizationFailure";
    case ErrorKind::NotConvexified: return "NotConvexified";
    case ErrorKind::NotPositiveOnNullspace: return "NotPositiveOnNullspace";
    case ErrorKind::NotPsdOnNullspace: return "NotPsdOnNullspace";
    case ErrorKind::InfeasibleModel: return "InfeasibleModel";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace sdpkit
