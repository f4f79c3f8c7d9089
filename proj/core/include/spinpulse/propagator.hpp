#pragma once

// Brute-force time-ordered evolution of the pulsed two-spin Hamiltonian.

#include <vector>

#include "spinpulse/pulse_models.hpp"
#include "spinpulse/spin_algebra.hpp"

namespace spinpulse {

/// Drift beyond which a propagated gate is rejected.
inline constexpr double kMaxUnitarityDrift = 1e-10;

struct PropagationResult {
  /// U at the right edge of the truncation window, started from I at the left.
  Operator gate;
  double unitarity_drift = 0.0;
  long steps_used = 0;
  /// ||U_steps - U_{steps/2}||_F of the last refinement.
  double estimated_error = 0.0;
  /// Self-differences of every refinement, coarsest first.
  std::vector<double> refinement_history;
};

struct PropagationOptions {
  double tol = 1e-11;
  long initial_steps = 128;
  long max_steps = 1L << 22;
};

/// H(t) = J(t) (S1.S2 + beta(t).(S1 x S2) + S1.Gamma(t).S2)
Operator hamiltonian_at(const PulseProfile& p, const AnisotropyProfile& a, double t);

/// Classic RK4 on dU/dt = -i H(t) U over the pulse window; the step count
/// doubles until successive gates differ by < tol.
///
/// Throws InvalidArgument (tol outside [1e-13, 1e-6]), NoConvergence and
/// UnitarityLost.
PropagationResult propagate(const PulseProfile& p, const AnisotropyProfile& a, double tol);
PropagationResult propagate(const PulseProfile& p, const AnisotropyProfile& a,
                            const PropagationOptions& options);

/// One RK4 sweep with a fixed number of equal steps over [t_begin, t_end].
/// The generator is any callable t -> Hermitian Operator.
template <class Generator>
Operator rk4_evolve(Generator&& h, double t_begin, double t_end, long steps) {
  const Complex minus_i{0.0, -1.0};
  const double dt = (t_end - t_begin) / static_cast<double>(steps);
  Operator u = Operator::Identity();
  Operator h_left = h(t_begin);
  for (long n = 0; n < steps; ++n) {
    const double t = t_begin + dt * static_cast<double>(n);
    const Operator h_mid = h(t + 0.5 * dt);
    const Operator h_right = h(n + 1 == steps ? t_end : t + dt);
    const Operator k1 = minus_i * (h_left * u);
    const Operator k2 = minus_i * (h_mid * (u + (0.5 * dt) * k1));
    const Operator k3 = minus_i * (h_mid * (u + (0.5 * dt) * k2));
    const Operator k4 = minus_i * (h_right * (u + dt * k3));
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_left = h_right;
  }
  return u;
}

/// U0(t) = exp(-i x(t) S1.S2); closed form, no integration.
Operator unperturbed_gate(const PulseProfile& p, double t);

/// exp(-i lambda S1.S2), the full-pulse unperturbed gate.
Operator unperturbed_full_gate(const PulseProfile& p);

}  // namespace spinpulse
