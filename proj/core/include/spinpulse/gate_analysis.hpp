#pragma once

// Tomography of propagated gates and comparison against the perturbative
// effective Hamiltonian.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinpulse/effective_hamiltonian.hpp"
#include "spinpulse/error.hpp"
#include "spinpulse/propagator.hpp"

namespace spinpulse {

struct ExtractionResult {
  AnisotropyParams params;
  /// Tr(H S1.S2) / Tr((S1.S2)^2) of the recovered generator; 1 + O(so^2).
  double isotropic_coefficient = 1.0;
  /// -Tr(H)/4 * lambda, the global phase removed before decomposition.
  double global_phase = 0.0;
};

/// Recovers A from U = exp(-i lambda (S1.S2 + A)). The isotropic part of the
/// generator is fixed at exactly 1 S1.S2; any deviation lands in the trace of
/// Gamma and in isotropic_coefficient.
///
/// Throws what matrix_log_branched throws, and IsotropicCoefficientAnomalous
/// when the coefficient is off by more than 0.2.
ExtractionResult extract_params(const Operator& u, double lambda, const LogOptions& options = {});

struct BlockDiscrepancy {
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double gamma = 0.0;

  double max() const;
};

BlockDiscrepancy block_discrepancy(const AnisotropyParams& a, const AnisotropyParams& b);

/// A stage that failed inside run_comparison without aborting the report.
struct StageIssue {
  std::string stage;
  ErrorCode code;
  std::string message;
};

struct GateReport {
  double lambda = 0.0;

  Operator numeric_gate;
  double unitarity_drift = 0.0;
  long steps_used = 0;
  double propagation_error = 0.0;

  std::optional<PerturbativeResult> predicted;
  std::optional<Operator> effective_gate;
  /// Effective gate built from the first-order blocks (alpha, beta) only.
  std::optional<Operator> first_order_gate;
  std::optional<ExtractionResult> extracted;

  std::optional<GateDistance> distance;
  std::optional<GateDistance> first_order_distance;
  std::optional<BlockDiscrepancy> discrepancy;

  Validity validity;
  std::vector<StageIssue> issues;
};

/// Propagates, predicts, extracts and compares. Propagation failures throw;
/// failures of the later stages (resonance guard, branch problems) are kept
/// in `issues` and the corresponding fields stay empty.
GateReport run_comparison(const PulseProfile& p, const AnisotropyProfile& a,
                          const QuadratureSpec& q, double tol);

struct ScalingRow {
  double scale = 0.0;
  double first_order_distance = 0.0;
  double second_order_distance = 0.0;
  double alpha_norm = 0.0;
  double beta_norm = 0.0;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;  // ascending scale
  std::optional<double> first_order_slope;
  std::optional<double> second_order_slope;
};

/// Largest |beta(t)| and |Gamma(t)| entry sampled over the pulse window.
double max_spin_orbit_magnitude(const PulseProfile& p, const AnisotropyProfile& a);

/// Runs run_comparison with the spin-orbit profile scaled by each factor and
/// fits log-log slopes of the gate errors (expected about 2 and 3). Slopes are
/// absent when any distance is at the propagation noise floor (10 tol).
///
/// Throws InvalidArgument for fewer than three scales, non-positive scales, or
/// scaled magnitudes above 0.05.
ScalingStudy scaling_study(const PulseProfile& p, const AnisotropyProfile& a,
                           std::span<const double> scales, const QuadratureSpec& q, double tol);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace spinpulse
