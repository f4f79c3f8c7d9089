#include "spinpulse/effective_hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "series.hpp"
#include "spinpulse/error.hpp"

namespace spinpulse {
namespace {

constexpr double kPi = std::numbers::pi;

Vec3 beta_at_fraction(const PulseProfile& p, const AnisotropyProfile& a, double s) {
  return eval_beta(a, p, p.time_at_fraction(s));
}

template <class T>
Quadrature<T> scaled(Quadrature<T> r, double factor) {
  r.value *= factor;
  r.info.change *= std::abs(factor);
  return r;
}

void check_closed_form_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0 && lambda < 2.0 * kPi)) {
    throw Error(ErrorCode::LambdaOutOfRange,
                std::string(what) + ": lambda " + std::to_string(lambda) + " outside (0, 2pi)");
  }
}

Mat3 transverse_projector(const Vec3& v) {
  return v.squaredNorm() * Mat3::Identity() - v * v.transpose();
}

}  // namespace

double resonance_distance(double lambda) {
  double n = std::round(lambda / (2.0 * kPi));
  if (n == 0.0) n = lambda >= 0.0 ? 1.0 : -1.0;
  return std::abs(lambda - 2.0 * kPi * n);
}

void check_quadrature_lambda(double lambda, const char* what) {
  if (!(lambda >= kMinQuadratureLambda)) {
    throw Error(ErrorCode::LambdaOutOfRange,
                std::string(what) + ": lambda " + std::to_string(lambda) + " below " +
                    std::to_string(kMinQuadratureLambda));
  }
  if (resonance_distance(lambda) < kResonanceGuard) {
    throw Error(ErrorCode::ResonantLambda,
                std::string(what) + ": lambda " + std::to_string(lambda) +
                    " within the resonance guard of 2 pi n");
  }
}

Quadrature<Vec3> alpha_bar(const PulseProfile& p, const AnisotropyProfile& a,
                           const QuadratureSpec& q) {
  const double lambda = p.lambda();
  check_quadrature_lambda(lambda, "alpha_bar");
  auto integrand = [&](double s) -> Vec3 {
    return beta_at_fraction(p, a, s) * std::sin(lambda * (s - 0.5));
  };
  return scaled(integrate_unit_interval(integrand, q, "alpha_bar"),
                lambda / (2.0 * std::sin(0.5 * lambda)));
}

Quadrature<Vec3> beta_bar(const PulseProfile& p, const AnisotropyProfile& a,
                          const QuadratureSpec& q) {
  const double lambda = p.lambda();
  check_quadrature_lambda(lambda, "beta_bar");
  auto integrand = [&](double s) -> Vec3 {
    return beta_at_fraction(p, a, s) * std::cos(lambda * (s - 0.5));
  };
  return scaled(integrate_unit_interval(integrand, q, "beta_bar"),
                lambda / (2.0 * std::sin(0.5 * lambda)));
}

Quadrature<Vec3> mu_bar(const PulseProfile& p, const AnisotropyProfile& a, const Vec3& alpha,
                        const Vec3& beta, const QuadratureSpec& q) {
  const double lambda = p.lambda();
  check_quadrature_lambda(lambda, "mu_bar");
  const Vec3 mean_cross = 2.0 * alpha.cross(beta);
  auto integrand = [&](double s1, double s2) -> Vec3 {
    const Vec3 b1 = beta_at_fraction(p, a, s1);
    const Vec3 b2 = beta_at_fraction(p, a, s2);
    const double phase = lambda * (s1 - s2);
    return b1.cross(b2) * std::cos(phase) + mean_cross * std::sin(phase);
  };
  return scaled(integrate_simplex(integrand, q, "mu_bar"), 0.25 * lambda);
}

Quadrature<SymMat3> gamma_bar(const PulseProfile& p, const AnisotropyProfile& a,
                              const Vec3& alpha, const Vec3& beta, const QuadratureSpec& q) {
  const double lambda = p.lambda();
  check_quadrature_lambda(lambda, "gamma_bar");

  auto local = [&](double s) -> Mat3 {
    return eval_gamma(a, p, p.time_at_fraction(s)).to_matrix();
  };
  const Quadrature<Mat3> first = integrate_unit_interval(local, q, "gamma_bar");

  const double mean_sq = beta.squaredNorm() + alpha.squaredNorm();
  const Mat3 mean_outer = 2.0 * (beta * beta.transpose() + alpha * alpha.transpose());
  auto kernel = [&](double s1, double s2) -> Mat3 {
    const Vec3 b1 = beta_at_fraction(p, a, s1);
    const Vec3 b2 = beta_at_fraction(p, a, s2);
    const Mat3 outer = b1 * b2.transpose();
    const Mat3 i_ab = 2.0 * (b1.dot(b2) - mean_sq) * Mat3::Identity() -
                      (outer + outer.transpose() - mean_outer);
    return i_ab * std::sin(lambda * (s1 - s2));
  };
  const Quadrature<Mat3> second = scaled(integrate_simplex(kernel, q, "gamma_bar"), 0.25 * lambda);

  Quadrature<SymMat3> out{SymMat3::from_matrix(first.value + second.value), {}};
  out.info.order = std::max(first.info.order, second.info.order);
  out.info.change = first.info.change + second.info.change;
  return out;
}

PerturbativeResult effective_params(const PulseProfile& p, const AnisotropyProfile& a,
                                    const QuadratureSpec& q) {
  PerturbativeResult r;
  const auto alpha = alpha_bar(p, a, q);
  const auto beta = beta_bar(p, a, q);
  const auto mu = mu_bar(p, a, alpha.value, beta.value, q);
  const auto gamma = gamma_bar(p, a, alpha.value, beta.value, q);
  r.params.alpha = alpha.value;
  r.params.beta = beta.value;
  r.params.mu = mu.value;
  r.params.gamma = gamma.value;
  r.alpha_info = alpha.info;
  r.beta_info = beta.info;
  r.mu_info = mu.info;
  r.gamma_info = gamma.info;
  return r;
}

Vec3 closed_form_beta_bar(const Vec3& beta1, double j0, double lambda) {
  check_closed_form_lambda(lambda, "closed_form_beta_bar");
  return beta1 * (4.0 * j0 * tailoring_factor(lambda) / (lambda * lambda));
}

SymMat3 closed_form_residual_gamma(const Vec3& beta1, double j0, double lambda) {
  check_closed_form_lambda(lambda, "closed_form_residual_gamma");
  // lambda^2 + 6 lambda cot(lambda/2) - 12 = lambda^2 - 6 (2 - lambda cot(lambda/2));
  // the lambda^2 terms cancel analytically in the series.
  const double bracket = lambda < detail::kSeriesCrossover
                             ? -6.0 * detail::cot_half_series_tail(lambda, 2)
                             : lambda * lambda + 6.0 * lambda / std::tan(0.5 * lambda) - 12.0;
  const double l2 = lambda * lambda;
  const double prefactor = 8.0 * j0 * j0 / (3.0 * l2 * l2) * bracket;
  return SymMat3::from_matrix(prefactor * transverse_projector(beta1));
}

Mat3 rotation_matrix(const Vec3& beta) {
  if (!(beta.norm() <= 0.3)) {
    throw Error(ErrorCode::BetaTooLarge,
                "rotation_matrix: |beta| = " + std::to_string(beta.norm()) + " exceeds 0.3");
  }
  Mat3 eps_beta;
  eps_beta << 0.0, beta.z(), -beta.y(),
              -beta.z(), 0.0, beta.x(),
              beta.y(), -beta.x(), 0.0;
  return Mat3::Identity() + eps_beta - 0.5 * transverse_projector(beta);
}

AnisotropyParams rotate_frame(const AnisotropyParams& params) {
  constexpr double kTol = 1e-10;
  const double residual = std::max(params.alpha.cwiseAbs().maxCoeff(), params.mu.cwiseAbs().maxCoeff());
  if (residual > kTol) {
    throw Error(ErrorCode::NonSymmetricResidual,
                "rotate_frame: alpha/mu magnitude " + std::to_string(residual) +
                    " (rotation assumes a time-symmetric pulse)");
  }
  AnisotropyParams out = params;
  out.beta = Vec3::Zero();
  out.gamma += SymMat3::from_matrix(0.5 * transverse_projector(params.beta));
  return out;
}

Validity validity_of(const AnisotropyParams& params, double lambda) {
  Validity v;
  v.lambda_beta = std::abs(lambda) * params.beta.norm();
  v.lambda_alpha = std::abs(lambda) * params.alpha.norm();
  v.near_resonance = resonance_distance(lambda) < kResonanceGuard;
  return v;
}

EffectiveGate effective_gate(const AnisotropyParams& params, double lambda) {
  EffectiveGate g;
  g.params = params;
  g.lambda = lambda;
  g.gate = matrix_exp(heisenberg_term() + assemble_anisotropy(params), lambda);
  g.validity = validity_of(params, lambda);
  return g;
}

}  // namespace spinpulse
