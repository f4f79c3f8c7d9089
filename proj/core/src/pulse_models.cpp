#include "spinpulse/pulse_models.hpp"

// pchip.hpp (Boost 1.74) calls isnan unqualified.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "series.hpp"
#include "spinpulse/error.hpp"

namespace spinpulse {
namespace {

constexpr double kPi = std::numbers::pi;

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

// 4-point Gauss-Legendre on [a, b]; exact for the cubic pieces of a PCHIP.
template <class F>
double gauss4(F&& f, double a, double b) {
  static constexpr double x[2] = {0.3399810435848563, 0.8611363115940526};
  static constexpr double w[2] = {0.6521451548625461, 0.3478548451374538};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) sum += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
  return h * sum;
}

void check_table(const std::vector<double>& times, std::size_t n_values, const char* what) {
  if (times.size() < 4 || times.size() != n_values) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": need at least 4 samples and matching lengths");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": times must increase strictly");
    }
  }
}

void check_domain(const std::vector<double>& times, double t, const char* what) {
  if (!(t >= times.front() && t <= times.back())) {
    throw Error(ErrorCode::OutOfTable, std::string(what) + ": t = " + std::to_string(t) +
                                           " outside [" + std::to_string(times.front()) + ", " +
                                           std::to_string(times.back()) + "]");
  }
}

Pchip make_pchip(std::vector<double> x, std::vector<double> y) {
  return Pchip(std::move(x), std::move(y));
}

}  // namespace

// ---------------------------------------------------------------------------
// Tailoring

double tailoring_factor(double lambda) {
  if (std::abs(lambda) < detail::kSeriesCrossover) return detail::cot_half_series_tail(lambda, 1);
  return 2.0 - lambda / std::tan(0.5 * lambda);
}

TailoredParams tailored_params(double lambda, double j0_ref, double tau_ref) {
  if (!(lambda > 0.0 && lambda < 2.0 * kPi)) {
    throw Error(ErrorCode::LambdaOutOfRange,
                "tailored_params: lambda " + std::to_string(lambda) + " outside (0, 2pi)");
  }
  if (!(j0_ref > 0.0 && tau_ref > 0.0)) {
    throw Error(ErrorCode::NonPositiveReference, "tailored_params: J0_ref and tau_ref must be > 0");
  }
  const double f = tailoring_factor(lambda);
  return {j0_ref * (2.0 * lambda * lambda / (kPi * kPi)) / f,
          tau_ref * (kPi / (2.0 * lambda)) * f};
}

// ---------------------------------------------------------------------------
// PulseProfile

struct PulseProfile::Table {
  std::vector<double> times;
  Pchip interp;
  std::vector<double> cumulative;  // x at each knot

  double j(double t) const { return std::max(0.0, interp(t)); }
};

PulseProfile PulseProfile::sech2(double j0, double tau, double t0) {
  if (!(j0 > 0.0 && tau > 0.0) || !std::isfinite(j0) || !std::isfinite(tau) || !std::isfinite(t0)) {
    throw Error(ErrorCode::InvalidArgument, "sech2 pulse needs finite J0 > 0 and tau > 0");
  }
  PulseProfile p;
  p.family_ = PulseFamily::Sech2;
  p.j0_ = j0;
  p.tau_ = tau;
  p.t0_ = t0;
  p.lambda_ = j0 * tau;
  return p;
}

PulseProfile PulseProfile::tailored_sech2(double lambda, double j0_ref, double tau_ref, double t0) {
  const TailoredParams tp = tailored_params(lambda, j0_ref, tau_ref);
  PulseProfile p = sech2(tp.j0, tp.tau, t0);
  p.family_ = PulseFamily::TailoredSech2;
  return p;
}

PulseProfile PulseProfile::tabulated(std::vector<double> times, std::vector<double> values) {
  const double mid = times.empty() ? 0.0 : 0.5 * (times.front() + times.back());
  return tabulated(std::move(times), std::move(values), mid);
}

PulseProfile PulseProfile::tabulated(std::vector<double> times, std::vector<double> values,
                                     double t0) {
  check_table(times, values.size(), "tabulated pulse");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "tabulated pulse: J samples must be finite and >= 0");
    }
  }
  const double peak = *std::max_element(values.begin(), values.end());
  auto table = std::make_shared<Table>(Table{times, make_pchip(times, values), {}});
  table->cumulative.resize(times.size());
  table->cumulative[0] = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    table->cumulative[k] =
        table->cumulative[k - 1] +
        gauss4([&](double t) { return table->j(t); }, times[k - 1], times[k]);
  }

  PulseProfile p;
  p.family_ = PulseFamily::Tabulated;
  p.j0_ = peak;
  p.t0_ = t0;
  p.lambda_ = table->cumulative.back();
  p.tau_ = peak > 0.0 ? p.lambda_ / peak : times.back() - times.front();
  p.table_ = std::move(table);
  return p;
}

double PulseProfile::j(double t) const {
  if (table_) {
    check_domain(table_->times, t, "tabulated pulse");
    return table_->j(t);
  }
  const double c = std::cosh(2.0 * (t - t0_) / tau_);
  return j0_ / (c * c);
}

double PulseProfile::x(double t) const {
  if (table_) {
    const auto& ts = table_->times;
    if (t <= ts.front()) return 0.0;
    if (t >= ts.back()) return lambda_;
    const auto k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
    return table_->cumulative[k] + gauss4([&](double u) { return table_->j(u); }, ts[k], t);
  }
  // (1 + tanh u) / 2 written without cancellation for u << 0.
  const double u = 2.0 * (t - t0_) / tau_;
  return lambda_ / (1.0 + std::exp(-2.0 * u));
}

double PulseProfile::time_at_fraction(double s) const {
  if (!(s > 0.0 && s < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "time_at_fraction: s must lie in (0, 1)");
  }
  if (!table_) return t0_ + 0.25 * tau_ * std::log(s / (1.0 - s));

  if (!(lambda_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "time_at_fraction: pulse has zero strength");
  }
  const double target = s * lambda_;
  const auto& cum = table_->cumulative;
  const auto& ts = table_->times;
  const auto k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
  double lo = ts[std::min(k, ts.size() - 1) - 1];
  double hi = ts[std::min(k, ts.size() - 1)];
  // Safeguarded Newton: x' = J >= 0, bracket shrinks every step.
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(t)); ++it) {
    const double f = x(t) - target;
    if (f > 0.0) hi = t; else lo = t;
    const double slope = table_->j(t);
    double next = slope > 0.0 ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-16 * std::max(1.0, std::abs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

TimeGrid PulseProfile::window() const {
  if (table_) return {table_->times.front(), table_->times.back(), TimeGrid::Mode::PhysicalTime};
  // sech^2(u) <= threshold  <=>  cosh(u) >= threshold^{-1/2}
  const double half = 0.5 * tau_ * std::acosh(1.0 / std::sqrt(kTruncationThreshold));
  return {t0_ - half, t0_ + half, TimeGrid::Mode::PhysicalTime};
}

PulseProfile PulseProfile::shifted(double dt) const {
  if (!table_) {
    PulseProfile p = *this;
    p.t0_ += dt;
    return p;
  }
  std::vector<double> times = table_->times;
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(table_->j(t));
  for (double& t : times) t += dt;
  return tabulated(std::move(times), std::move(values), t0_ + dt);
}

// ---------------------------------------------------------------------------
// Tabulated anisotropy

struct TabulatedBeta::Impl {
  std::vector<double> times;
  std::vector<Vec3> values;
  std::vector<Pchip> components;
};

TabulatedBeta::TabulatedBeta(std::vector<double> times, std::vector<Vec3> values) {
  check_table(times, values.size(), "tabulated beta");
  auto impl = std::make_shared<Impl>();
  for (int c = 0; c < 3; ++c) {
    std::vector<double> y;
    y.reserve(values.size());
    for (const Vec3& v : values) y.push_back(v[c]);
    impl->components.push_back(make_pchip(times, std::move(y)));
  }
  impl->times = std::move(times);
  impl->values = std::move(values);
  impl_ = std::move(impl);
}

Vec3 TabulatedBeta::operator()(double t) const {
  check_domain(impl_->times, t, "tabulated beta");
  return {impl_->components[0](t), impl_->components[1](t), impl_->components[2](t)};
}

TabulatedBeta TabulatedBeta::scaled(double c) const {
  std::vector<Vec3> values = impl_->values;
  for (Vec3& v : values) v *= c;
  return {impl_->times, std::move(values)};
}

std::span<const double> TabulatedBeta::times() const { return impl_->times; }
std::span<const Vec3> TabulatedBeta::values() const { return impl_->values; }

struct TabulatedGamma::Impl {
  std::vector<double> times;
  std::vector<SymMat3> values;
  std::vector<Pchip> components;
};

TabulatedGamma::TabulatedGamma(std::vector<double> times, std::vector<SymMat3> values) {
  check_table(times, values.size(), "tabulated gamma");
  auto impl = std::make_shared<Impl>();
  for (int c = 0; c < 6; ++c) {
    std::vector<double> y;
    y.reserve(values.size());
    for (const SymMat3& v : values) y.push_back(v.entries()[c]);
    impl->components.push_back(make_pchip(times, std::move(y)));
  }
  impl->times = std::move(times);
  impl->values = std::move(values);
  impl_ = std::move(impl);
}

SymMat3 TabulatedGamma::operator()(double t) const {
  check_domain(impl_->times, t, "tabulated gamma");
  const auto& c = impl_->components;
  return {c[0](t), c[1](t), c[2](t), c[3](t), c[4](t), c[5](t)};
}

TabulatedGamma TabulatedGamma::scaled(double c) const {
  std::vector<SymMat3> values = impl_->values;
  for (SymMat3& v : values) v *= c;
  return {impl_->times, std::move(values)};
}

std::span<const double> TabulatedGamma::times() const { return impl_->times; }
std::span<const SymMat3> TabulatedGamma::values() const { return impl_->values; }

// ---------------------------------------------------------------------------
// AnisotropyProfile

AnisotropyProfile AnisotropyProfile::scaled(double c) const {
  AnisotropyProfile out;
  out.beta = std::visit(
      [c](const auto& m) -> BetaModel {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearInJ>) {
          return LinearInJ{c * m.beta1};
        } else if constexpr (std::is_same_v<M, SkewedLinearInJ>) {
          return SkewedLinearInJ{c * m.beta1, c * m.skew};
        } else {
          return m.scaled(c);
        }
      },
      beta);
  out.gamma = std::visit(
      [c](const auto& m) -> GammaModel {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ProportionalToJ>) {
          return ProportionalToJ{(c * c) * m.gamma0};
        } else if constexpr (std::is_same_v<M, TabulatedGamma>) {
          return m.scaled(c * c);
        } else {
          return m;
        }
      },
      gamma);
  return out;
}

Vec3 eval_beta(const AnisotropyProfile& a, const PulseProfile& p, double t) {
  return std::visit(
      [&](const auto& m) -> Vec3 {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearInJ>) {
          return m.beta1 * p.j(t);
        } else if constexpr (std::is_same_v<M, SkewedLinearInJ>) {
          return p.j(t) * (m.beta1 + m.skew * std::tanh(2.0 * (t - p.t0()) / p.tau()));
        } else {
          return m(t);
        }
      },
      a.beta);
}

SymMat3 eval_gamma(const AnisotropyProfile& a, const PulseProfile& p, double t) {
  return std::visit(
      [&](const auto& m) -> SymMat3 {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NoGamma>) {
          return SymMat3::zero();
        } else if constexpr (std::is_same_v<M, RotatedExchange>) {
          const Vec3 b = eval_beta(a, p, t);
          const Mat3 g = -0.5 * (b.squaredNorm() * Mat3::Identity() - b * b.transpose());
          return SymMat3::from_matrix(g);
        } else if constexpr (std::is_same_v<M, ProportionalToJ>) {
          return (p.j(t) / p.j0()) * m.gamma0;
        } else {
          return m(t);
        }
      },
      a.gamma);
}

bool is_time_symmetric(const PulseProfile& p, const AnisotropyProfile& a, double tol) {
  const TimeGrid w = p.window();
  const double half = std::min(p.t0() - w.t_min, w.t_max - p.t0());
  if (!(half > 0.0)) return false;
  constexpr int kSamples = 64;
  for (int k = 1; k <= kSamples; ++k) {
    const double d = half * k / kSamples;
    const double plus = p.t0() + d;
    const double minus = p.t0() - d;
    if (!(std::abs(p.j(plus) - p.j(minus)) <= tol)) return false;
    if (!((eval_beta(a, p, plus) - eval_beta(a, p, minus)).cwiseAbs().maxCoeff() <= tol)) return false;
    if (!((eval_gamma(a, p, plus) - eval_gamma(a, p, minus)).max_abs() <= tol)) return false;
  }
  return true;
}

}  // namespace spinpulse
