#include "spinpulse/gate_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spinpulse {

ExtractionResult extract_params(const Operator& u, double lambda, const LogOptions& options) {
  Operator h = matrix_log_branched(u, lambda, options);
  ExtractionResult r;
  const double trace = h.trace().real();
  r.global_phase = -0.25 * trace * lambda;
  h -= (0.25 * trace) * Operator::Identity();

  r.isotropic_coefficient =
      trace_inner(heisenberg_term(), h).real() / generator_norms().heisenberg;
  if (std::abs(r.isotropic_coefficient - 1.0) > 0.2) {
    throw Error(ErrorCode::IsotropicCoefficientAnomalous,
                "extract_params: S1.S2 coefficient " + std::to_string(r.isotropic_coefficient));
  }
  r.params = decompose_anisotropy(h - heisenberg_term());
  return r;
}

double BlockDiscrepancy::max() const { return std::max({alpha, beta, mu, gamma}); }

BlockDiscrepancy block_discrepancy(const AnisotropyParams& a, const AnisotropyParams& b) {
  BlockDiscrepancy d;
  d.alpha = (a.alpha - b.alpha).cwiseAbs().maxCoeff();
  d.beta = (a.beta - b.beta).cwiseAbs().maxCoeff();
  d.mu = (a.mu - b.mu).cwiseAbs().maxCoeff();
  d.gamma = (a.gamma - b.gamma).max_abs();
  return d;
}

GateReport run_comparison(const PulseProfile& p, const AnisotropyProfile& a,
                          const QuadratureSpec& q, double tol) {
  GateReport report;
  report.lambda = p.lambda();

  const PropagationResult prop = propagate(p, a, tol);
  report.numeric_gate = prop.gate;
  report.unitarity_drift = prop.unitarity_drift;
  report.steps_used = prop.steps_used;
  report.propagation_error = prop.estimated_error;
  report.validity.near_resonance = resonance_distance(report.lambda) < kResonanceGuard;

  try {
    report.predicted = effective_params(p, a, q);
    const AnisotropyParams& params = report.predicted->params;
    const EffectiveGate full = effective_gate(params, report.lambda);
    AnisotropyParams first = AnisotropyParams{};
    first.alpha = params.alpha;
    first.beta = params.beta;
    report.effective_gate = full.gate;
    report.first_order_gate = effective_gate(first, report.lambda).gate;
    report.validity = full.validity;
    report.distance = gate_distance(report.numeric_gate, *report.effective_gate);
    report.first_order_distance = gate_distance(report.numeric_gate, *report.first_order_gate);
  } catch (const Error& e) {
    report.issues.push_back({"predict", e.code(), e.what()});
  }

  try {
    report.extracted = extract_params(report.numeric_gate, report.lambda);
    if (!report.predicted) {
      report.validity.lambda_beta = std::abs(report.lambda) * report.extracted->params.beta.norm();
      report.validity.lambda_alpha = std::abs(report.lambda) * report.extracted->params.alpha.norm();
    }
  } catch (const Error& e) {
    report.issues.push_back({"extract", e.code(), e.what()});
  }

  if (report.predicted && report.extracted) {
    report.discrepancy = block_discrepancy(report.extracted->params, report.predicted->params);
  }
  return report;
}

double max_spin_orbit_magnitude(const PulseProfile& p, const AnisotropyProfile& a) {
  const TimeGrid w = p.window();
  constexpr int kSamples = 257;
  double m = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double t = w.t_min + (w.t_max - w.t_min) * k / (kSamples - 1);
    m = std::max(m, eval_beta(a, p, t).norm());
    m = std::max(m, eval_gamma(a, p, t).max_abs());
  }
  return m;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "loglog_slope: need matching inputs of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingStudy scaling_study(const PulseProfile& p, const AnisotropyProfile& a,
                           std::span<const double> scales, const QuadratureSpec& q, double tol) {
  if (scales.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "scaling_study: at least three scales are required");
  }
  std::vector<double> sorted(scales.begin(), scales.end());
  std::sort(sorted.begin(), sorted.end());
  for (double c : sorted) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "scaling_study: scales must be > 0");
    const double magnitude = max_spin_orbit_magnitude(p, a.scaled(c));
    if (magnitude > 0.05) {
      throw Error(ErrorCode::InvalidArgument,
                  "scaling_study: spin-orbit magnitude " + std::to_string(magnitude) +
                      " at scale " + std::to_string(c) + " exceeds 0.05");
    }
  }

  ScalingStudy study;
  std::vector<double> first, second;
  bool above_floor = true;
  for (double c : sorted) {
    const GateReport report = run_comparison(p, a.scaled(c), q, tol);
    if (!report.distance || !report.first_order_distance) {
      const StageIssue& issue = report.issues.front();
      throw Error(issue.code, "scaling_study: " + issue.message);
    }
    ScalingRow row;
    row.scale = c;
    row.first_order_distance = report.first_order_distance->frobenius_phase_free;
    row.second_order_distance = report.distance->frobenius_phase_free;
    row.alpha_norm = report.predicted->params.alpha.norm();
    row.beta_norm = report.predicted->params.beta.norm();
    above_floor = above_floor && row.first_order_distance > 10.0 * tol &&
                  row.second_order_distance > 10.0 * tol;
    first.push_back(row.first_order_distance);
    second.push_back(row.second_order_distance);
    study.rows.push_back(row);
  }
  if (above_floor) {
    study.first_order_slope = loglog_slope(sorted, first);
    study.second_order_slope = loglog_slope(sorted, second);
  }
  return study;
}

}  // namespace spinpulse
