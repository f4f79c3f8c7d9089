#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spinpulse {

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  NotTraceless,
  NotUnitary,
  BranchAmbiguous,
  LambdaOutOfRange,
  ResonantLambda,
  QuadratureNoConvergence,
  NoConvergence,
  UnitarityLost,
  OutOfTable,
  NonPositiveReference,
  BetaTooLarge,
  NonSymmetricResidual,
  IsotropicCoefficientAnomalous,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to row-level statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spinpulse
