#include "spinpulse/error.hpp"

namespace spinpulse {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotTraceless: return "NotTraceless";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::BranchAmbiguous: return "BranchAmbiguous";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::ResonantLambda: return "ResonantLambda";
    case ErrorCode::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnitarityLost: return "UnitarityLost";
    case ErrorCode::OutOfTable: return "OutOfTable";
    case ErrorCode::NonPositiveReference: return "NonPositiveReference";
    case ErrorCode::BetaTooLarge: return "BetaTooLarge";
    case ErrorCode::NonSymmetricResidual: return "NonSymmetricResidual";
    case ErrorCode::IsotropicCoefficientAnomalous: return "IsotropicCoefficientAnomalous";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace spinpulse
