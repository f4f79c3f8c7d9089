#pragma once

// Second-order effective Hamiltonian of a pulsed anisotropic exchange gate.
//
// A pulse J(t) with spin-orbit profiles beta(t), Gamma(t) produces the same
// gate as the time-independent generator S1.S2 + A applied with strength
// lambda, where A is parametrized by (alpha, beta, mu, Gamma); see
// spin_algebra.hpp for the operator form.
//
// Every time integral is taken in the pulse-measure variable s = x(t)/lambda,
// J dt = lambda ds, which maps the infinite time axis onto [0, 1] and the
// ordered double integrals onto the simplex 0 <= s2 <= s1 <= 1.

#include "spinpulse/pulse_models.hpp"
#include "spinpulse/quadrature.hpp"
#include "spinpulse/spin_algebra.hpp"

namespace spinpulse {

/// Distance from lambda = 2 pi n (n != 0) inside which the expansion is not
/// evaluated.
inline constexpr double kResonanceGuard = 0.1;
/// Smallest lambda the quadrature routines accept.
inline constexpr double kMinQuadratureLambda = 0.1;
/// |lambda beta|, |lambda alpha| above this are outside the trust region.
inline constexpr double kTrustThreshold = 0.1;

/// Distance from lambda to the nearest 2 pi n with n != 0.
double resonance_distance(double lambda);

/// Throws LambdaOutOfRange for lambda < 0.1 and ResonantLambda inside the
/// resonance guard.
void check_quadrature_lambda(double lambda, const char* what);

/// alpha = (lambda / (2 sin(lambda/2))) int_0^1 beta(s) sin(lambda s - lambda/2) ds
Quadrature<Vec3> alpha_bar(const PulseProfile& p, const AnisotropyProfile& a,
                           const QuadratureSpec& q = {});

/// beta = (lambda / (2 sin(lambda/2))) int_0^1 beta(s) cos(lambda s - lambda/2) ds
Quadrature<Vec3> beta_bar(const PulseProfile& p, const AnisotropyProfile& a,
                          const QuadratureSpec& q = {});

/// mu = (lambda/4) int_simplex [ (beta(s1) x beta(s2)) cos(lambda (s1 - s2))
///                              + 2 (alpha x beta) sin(lambda (s1 - s2)) ]
/// with alpha, beta the first-order averages.
Quadrature<Vec3> mu_bar(const PulseProfile& p, const AnisotropyProfile& a, const Vec3& alpha,
                        const Vec3& beta, const QuadratureSpec& q = {});

/// Gamma_ab = int_0^1 Gamma_ab(s) ds
///          + (lambda/4) int_simplex I_ab(s1, s2) sin(lambda (s1 - s2))
/// with the kernel
///   I_ab = 2 (beta(s1).beta(s2) - |beta|^2 - |alpha|^2) delta_ab
///        - (beta_a(s1) beta_b(s2) + beta_a(s2) beta_b(s1) - 2 beta_a beta_b - 2 alpha_a alpha_b).
/// The reported info sums the two parts' change estimates.
Quadrature<SymMat3> gamma_bar(const PulseProfile& p, const AnisotropyProfile& a,
                              const Vec3& alpha, const Vec3& beta, const QuadratureSpec& q = {});

struct PerturbativeResult {
  AnisotropyParams params;
  QuadratureInfo alpha_info;
  QuadratureInfo beta_info;
  QuadratureInfo mu_info;
  QuadratureInfo gamma_info;
};

/// All four blocks, first order feeding second order.
PerturbativeResult effective_params(const PulseProfile& p, const AnisotropyProfile& a,
                                    const QuadratureSpec& q = {});

/// beta1 (4 J0 / lambda^2) (2 - lambda cot(lambda/2)) for the linear-in-J
/// model on a sech^2 pulse. Small lambda goes through the series
/// (-> 2 J0 / 3). Throws LambdaOutOfRange outside (0, 2 pi).
Vec3 closed_form_beta_bar(const Vec3& beta1, double j0, double lambda);

/// Residual symmetric anisotropy after the beta-eliminating rotation for the
/// rotated-exchange model on a sech^2 pulse:
///   (8 J0^2 / (3 lambda^4)) (lambda^2 + 6 lambda cot(lambda/2) - 12)
///     (|beta1|^2 delta_ab - beta1_a beta1_b).
SymMat3 closed_form_residual_gamma(const Vec3& beta1, double j0, double lambda);

/// Second-order rotation R_ab = delta_ab + eps_abc beta_c - (|beta|^2 delta_ab - beta_a beta_b)/2.
/// Throws BetaTooLarge for |beta| > 0.3.
Mat3 rotation_matrix(const Vec3& beta);

/// Absorbs beta into a local frame rotation of spin 2:
///   beta -> 0, Gamma -> Gamma + (|beta|^2 delta - beta beta^T)/2.
/// Requires alpha and mu below 1e-10 (NonSymmetricResidual otherwise).
AnisotropyParams rotate_frame(const AnisotropyParams& params);

struct Validity {
  double lambda_beta = 0.0;
  double lambda_alpha = 0.0;
  bool near_resonance = false;

  bool in_trust_region() const {
    return lambda_beta <= kTrustThreshold && lambda_alpha <= kTrustThreshold && !near_resonance;
  }
};

Validity validity_of(const AnisotropyParams& params, double lambda);

struct EffectiveGate {
  AnisotropyParams params;
  double lambda = 0.0;
  /// exp(-i lambda (S1.S2 + A))
  Operator gate;
  Validity validity;
};

EffectiveGate effective_gate(const AnisotropyParams& params, double lambda);

}  // namespace spinpulse
