#pragma once

// Exchange pulse J(t), accumulated angle x(t) and the spin-orbit profiles
// beta(t), Gamma(t) that ride on it.

#include <memory>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "spinpulse/spin_algebra.hpp"

namespace spinpulse {

enum class PulseFamily { Sech2, TailoredSech2, Tabulated };

/// J(t_edge) / J0 at the edges of the truncated time window.
inline constexpr double kTruncationThreshold = 1e-14;

struct TimeGrid {
  enum class Mode { PhysicalTime, PulseMeasure };
  double t_min = 0.0;
  double t_max = 0.0;
  Mode mode = Mode::PhysicalTime;
};

struct TailoredParams {
  double j0;
  double tau;
};

/// J0(lambda), tau(lambda) that keep the linear-in-J averaged DM vector
/// fixed at its lambda = pi value. Reference values are the lambda = pi pulse.
/// Throws LambdaOutOfRange outside (0, 2 pi), NonPositiveReference.
TailoredParams tailored_params(double lambda, double j0_ref, double tau_ref);

/// 2 - lambda cot(lambda/2), with a Bernoulli series for small lambda.
double tailoring_factor(double lambda);

class PulseProfile {
 public:
  /// J(t) = j0 sech^2(2 (t - t0) / tau); lambda = j0 tau.
  static PulseProfile sech2(double j0, double tau, double t0 = 0.0);
  /// Sech2 shape with (J0, tau) from tailored_params(lambda, ...).
  static PulseProfile tailored_sech2(double lambda, double j0_ref = 1.0,
                                     double tau_ref = std::numbers::pi, double t0 = 0.0);
  /// Shape-preserving cubic (PCHIP) interpolation of samples, clamped at 0.
  /// t0 defaults to the midpoint of the table.
  static PulseProfile tabulated(std::vector<double> times, std::vector<double> values);
  static PulseProfile tabulated(std::vector<double> times, std::vector<double> values, double t0);

  PulseFamily family() const { return family_; }
  double j0() const { return j0_; }
  /// For tabulated pulses this is the equivalent width lambda / max J.
  double tau() const { return tau_; }
  double t0() const { return t0_; }
  double lambda() const { return lambda_; }

  /// Throws OutOfTable outside a tabulated pulse's domain.
  double j(double t) const;
  /// x(t) = integral of J from -inf to t. Saturates at 0 and lambda.
  double x(double t) const;
  /// t with x(t) = s * lambda for s in (0, 1).
  double time_at_fraction(double s) const;

  TimeGrid window() const;
  PulseProfile shifted(double dt) const;

 private:
  struct Table;

  PulseFamily family_ = PulseFamily::Sech2;
  double j0_ = 1.0;
  double tau_ = std::numbers::pi;
  double t0_ = 0.0;
  double lambda_ = std::numbers::pi;
  std::shared_ptr<const Table> table_;
};

// beta(t) models ------------------------------------------------------------

/// beta(t) = beta1 J(t).
struct LinearInJ {
  Vec3 beta1 = Vec3::Zero();
};

/// beta(t) = J(t) (beta1 + skew tanh(2 (t - t0) / tau)); breaks time-reversal
/// symmetry whenever skew != 0.
struct SkewedLinearInJ {
  Vec3 beta1 = Vec3::Zero();
  Vec3 skew = Vec3::Zero();
};

/// PCHIP interpolation of samples; throws OutOfTable outside the table.
class TabulatedBeta {
 public:
  TabulatedBeta(std::vector<double> times, std::vector<Vec3> values);
  Vec3 operator()(double t) const;
  TabulatedBeta scaled(double c) const;
  std::span<const double> times() const;
  std::span<const Vec3> values() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

using BetaModel = std::variant<LinearInJ, SkewedLinearInJ, TabulatedBeta>;

// Gamma(t) models -----------------------------------------------------------

struct NoGamma {};

/// Gamma_ab(t) = -(|beta(t)|^2 delta_ab - beta_a(t) beta_b(t)) / 2.
struct RotatedExchange {};

/// Gamma(t) = gamma0 J(t) / J0.
struct ProportionalToJ {
  SymMat3 gamma0;
};

class TabulatedGamma {
 public:
  TabulatedGamma(std::vector<double> times, std::vector<SymMat3> values);
  SymMat3 operator()(double t) const;
  TabulatedGamma scaled(double c) const;
  std::span<const double> times() const;
  std::span<const SymMat3> values() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

using GammaModel = std::variant<NoGamma, RotatedExchange, ProportionalToJ, TabulatedGamma>;

struct AnisotropyProfile {
  BetaModel beta = LinearInJ{};
  GammaModel gamma = NoGamma{};

  static AnisotropyProfile isotropic() { return {}; }
  static AnisotropyProfile linear(const Vec3& beta1, GammaModel gamma = NoGamma{}) {
    return {LinearInJ{beta1}, std::move(gamma)};
  }

  /// Spin-orbit magnitude scaled by c: beta by c, Gamma by c^2.
  AnisotropyProfile scaled(double c) const;
};

Vec3 eval_beta(const AnisotropyProfile& a, const PulseProfile& p, double t);
SymMat3 eval_gamma(const AnisotropyProfile& a, const PulseProfile& p, double t);

/// Compares J, beta and Gamma at 64 mirrored pairs t0 +- d across the
/// truncation window.
bool is_time_symmetric(const PulseProfile& p, const AnisotropyProfile& a, double tol);

}  // namespace spinpulse
