#include "spinpulse/propagator.hpp"

#include <cmath>
#include <string>

#include "spinpulse/error.hpp"

namespace spinpulse {

Operator hamiltonian_at(const PulseProfile& p, const AnisotropyProfile& a, double t) {
  const double j = p.j(t);
  const Vec3 beta = eval_beta(a, p, t);
  const SymMat3 gamma = eval_gamma(a, p, t);
  AnisotropyParams local;
  local.beta = beta;
  local.gamma = gamma;
  return j * (heisenberg_term() + assemble_anisotropy(local));
}

PropagationResult propagate(const PulseProfile& p, const AnisotropyProfile& a, double tol) {
  PropagationOptions options;
  options.tol = tol;
  return propagate(p, a, options);
}

PropagationResult propagate(const PulseProfile& p, const AnisotropyProfile& a,
                            const PropagationOptions& options) {
  if (!(options.tol >= 1e-13 && options.tol <= 1e-6)) {
    throw Error(ErrorCode::InvalidArgument,
                "propagate: tol " + std::to_string(options.tol) + " outside [1e-13, 1e-6]");
  }
  if (options.initial_steps < 1 || options.max_steps < options.initial_steps) {
    throw Error(ErrorCode::InvalidArgument, "propagate: invalid step limits");
  }
  const TimeGrid w = p.window();
  auto h = [&](double t) { return hamiltonian_at(p, a, t); };

  PropagationResult result;
  long steps = options.initial_steps;
  Operator coarse = rk4_evolve(h, w.t_min, w.t_max, steps);
  bool rechecked = false;
  while (true) {
    if (2 * steps > options.max_steps) {
      throw Error(ErrorCode::NoConvergence,
                  "propagate: step cap " + std::to_string(options.max_steps) + " reached");
    }
    steps *= 2;
    Operator fine = rk4_evolve(h, w.t_min, w.t_max, steps);
    const double diff = (fine - coarse).norm();
    result.refinement_history.push_back(diff);
    coarse = fine;
    if (diff >= options.tol) continue;

    const double drift = unitarity_defect(fine);
    if (drift > kMaxUnitarityDrift) {
      // One further refinement before giving up: RK4 drift shrinks with h^4.
      if (!rechecked) {
        rechecked = true;
        continue;
      }
      throw Error(ErrorCode::UnitarityLost,
                  "propagate: unitarity drift " + std::to_string(drift));
    }
    result.gate = fine;
    result.unitarity_drift = drift;
    result.steps_used = steps;
    result.estimated_error = diff;
    return result;
  }
}

Operator unperturbed_gate(const PulseProfile& p, double t) {
  return matrix_exp(heisenberg_term(), p.x(t));
}

Operator unperturbed_full_gate(const PulseProfile& p) {
  return matrix_exp(heisenberg_term(), p.lambda());
}

}  // namespace spinpulse
