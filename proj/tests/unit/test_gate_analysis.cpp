#include "spinpulse/gate_analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spinpulse/error.hpp"

namespace spinpulse {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Extract, RoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> lam(0.3, 5.9);
  int checked = 0;
  while (checked < 200) {
    const double lambda = lam(rng);
    if (resonance_distance(lambda) < kResonanceGuard) continue;
    const AnisotropyParams p = testing::random_params(rng, 0.05);
    const ExtractionResult r = extract_params(effective_gate(p, lambda).gate, lambda);
    EXPECT_LT((r.params - p).max_abs(), 1e-11) << lambda;
    ++checked;
  }
}

TEST(Extract, UnperturbedGate) {
  for (double lambda : {0.5, kPi, 4.5}) {
    const ExtractionResult r = extract_params(matrix_exp(heisenberg_term(), lambda), lambda);
    EXPECT_LT(r.params.max_abs(), 1e-14);
    EXPECT_NEAR(r.isotropic_coefficient, 1.0, 1e-14);
  }
}

TEST(Extract, GlobalPhaseIsRemoved) {
  std::mt19937_64 rng(1);
  const AnisotropyParams p = testing::random_params(rng, 0.03);
  const Operator u = std::exp(Complex(0.0, 0.37)) * effective_gate(p, 2.0).gate;
  const ExtractionResult r = extract_params(u, 2.0);
  EXPECT_LT((r.params - p).max_abs(), 1e-12);
  EXPECT_NEAR(r.global_phase, 0.37, 1e-12);
}

TEST(Extract, AnomalousIsotropicCoefficient) {
  // A gate generated by 1.5 S1.S2 is not the lambda = 2 exchange gate.
  try {
    extract_params(matrix_exp(heisenberg_term(), 3.0), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IsotropicCoefficientAnomalous);
  }
}

TEST(Extract, PropagatedBetaMatchesClosedForm) {
  const double j0 = 1.0;
  const Vec3 beta1(0.01, 0.0, 0.0);
  const PulseProfile p = PulseProfile::sech2(j0, kPi);
  const ExtractionResult r =
      extract_params(propagate(p, AnisotropyProfile::linear(beta1), 1e-12).gate, kPi);
  const double expected = 8.0 * j0 * 0.01 / (kPi * kPi);
  EXPECT_LT(std::abs(r.params.beta.x() - expected), 1e-5);
  EXPECT_LT(r.params.alpha.norm(), 1e-10);
  EXPECT_LT(r.params.mu.norm(), 1e-10);
}

TEST(Comparison, IsotropicPulse) {
  const GateReport r = run_comparison(PulseProfile::sech2(1.0, 2.0), {}, {}, 1e-11);
  ASSERT_TRUE(r.distance.has_value());
  ASSERT_TRUE(r.extracted.has_value());
  EXPECT_LT(r.distance->frobenius_phase_free, 1e-10);
  EXPECT_LT(r.extracted->params.max_abs(), 1e-10);
  EXPECT_EQ(r.predicted->params.max_abs(), 0.0);
  EXPECT_TRUE(r.issues.empty());
}

TEST(Comparison, SymmetricPiPulseFidelity) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const GateReport r = run_comparison(p, AnisotropyProfile::linear(Vec3(0.01, 0.0, 0.0)), {}, 1e-11);
  ASSERT_TRUE(r.distance.has_value());
  EXPECT_GE(r.distance->fidelity, 1.0 - 1e-8);
  EXPECT_TRUE(r.validity.in_trust_region());
  ASSERT_TRUE(r.discrepancy.has_value());
  EXPECT_LT(r.discrepancy->alpha, 10 * 1e-11 + 1e-6);
  EXPECT_LT(r.discrepancy->mu, 10 * 1e-11 + 1e-6);
  EXPECT_LT(r.first_order_distance->frobenius_phase_free, 1e-4);
  EXPECT_GT(r.first_order_distance->frobenius_phase_free, r.distance->frobenius_phase_free);
}

TEST(Comparison, NearResonanceStillReports) {
  const double lambda = 2.0 * kPi - 0.05;
  const PulseProfile p = PulseProfile::sech2(1.0, lambda);
  const GateReport r = run_comparison(p, AnisotropyProfile::linear(Vec3(0.005, 0, 0)), {}, 1e-11);
  EXPECT_TRUE(r.validity.near_resonance);
  EXPECT_FALSE(r.predicted.has_value());
  EXPECT_FALSE(r.issues.empty());
  EXPECT_EQ(r.issues.front().code, ErrorCode::ResonantLambda);
  EXPECT_LE(r.unitarity_drift, kMaxUnitarityDrift);
}

TEST(Comparison, Deterministic) {
  const PulseProfile p = PulseProfile::sech2(1.1, 2.0);
  const AnisotropyProfile a = AnisotropyProfile::linear(Vec3(0.01, 0.02, 0.0), RotatedExchange{});
  const GateReport r1 = run_comparison(p, a, {}, 1e-11);
  const GateReport r2 = run_comparison(p, a, {}, 1e-11);
  EXPECT_EQ(r1.numeric_gate, r2.numeric_gate);
  EXPECT_EQ(*r1.effective_gate, *r2.effective_gate);
  EXPECT_EQ(r1.distance->frobenius_phase_free, r2.distance->frobenius_phase_free);
  EXPECT_EQ(r1.extracted->params.to_array(), r2.extracted->params.to_array());
}

TEST(Scaling, SymmetricPiSlopes) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const std::vector<double> scales = {1.0, 2.0, 4.0};
  const ScalingStudy s =
      scaling_study(p, AnisotropyProfile::linear(Vec3(0.005, 0.002, 0.0)), scales, {}, 1e-12);
  ASSERT_EQ(s.rows.size(), 3u);
  ASSERT_TRUE(s.first_order_slope.has_value());
  ASSERT_TRUE(s.second_order_slope.has_value());
  EXPECT_GE(*s.first_order_slope, 1.8);
  EXPECT_LE(*s.first_order_slope, 2.2);
  EXPECT_GE(*s.second_order_slope, 2.7);
  EXPECT_LE(*s.second_order_slope, 3.3);
}

TEST(Scaling, ZeroProfileHasNoSlopes) {
  const std::vector<double> scales = {1.0, 2.0, 4.0};
  const ScalingStudy s = scaling_study(PulseProfile::sech2(1.0, 2.0), {}, scales, {}, 1e-11);
  EXPECT_FALSE(s.first_order_slope.has_value());
  EXPECT_FALSE(s.second_order_slope.has_value());
  for (const ScalingRow& row : s.rows) {
    EXPECT_LE(row.first_order_distance, 1e-10);
    EXPECT_LE(row.second_order_distance, 1e-10);
  }
}

TEST(Scaling, InvalidInputs) {
  const PulseProfile p = PulseProfile::sech2(1.0, 2.0);
  const AnisotropyProfile a = AnisotropyProfile::linear(Vec3(0.02, 0, 0));
  const std::vector<double> two = {1.0, 2.0};
  const std::vector<double> negative = {1.0, -2.0, 3.0};
  const std::vector<double> too_big = {1.0, 2.0, 4.0};
  EXPECT_THROW(scaling_study(p, a, two, {}, 1e-11), Error);
  EXPECT_THROW(scaling_study(p, a, negative, {}, 1e-11), Error);
  EXPECT_THROW(scaling_study(p, a, too_big, {}, 1e-11), Error);
}

TEST(Scaling, SymmetrizedPulseKillsAlpha) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const Vec3 beta1(0.01, 0.0, 0.0);
  const AnisotropyProfile skewed{SkewedLinearInJ{beta1, beta1}, NoGamma{}};
  const AnisotropyProfile symmetrized = AnisotropyProfile::linear(beta1);
  const GateReport a = run_comparison(p, skewed, {}, 1e-11);
  const GateReport b = run_comparison(p, symmetrized, {}, 1e-11);
  EXPECT_GT(a.predicted->params.alpha.norm(), 1e-4);
  EXPECT_GT(a.extracted->params.alpha.norm(), 1e-4);
  EXPECT_LT(b.predicted->params.alpha.norm(), 1e-14);
  EXPECT_LT(b.extracted->params.alpha.norm(), 1e-9);
}

TEST(Slope, ExactPowerLaw) {
  const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v * v);
  EXPECT_NEAR(loglog_slope(x, y), 3.0, 1e-14);
}

TEST(Discrepancy, PerBlock) {
  AnisotropyParams a, b;
  a.alpha = Vec3(1, 0, 0);
  b.mu = Vec3(0, 0, -2);
  b.gamma = SymMat3(0, 0, 0, 0.5, 0, 0);
  const BlockDiscrepancy d = block_discrepancy(a, b);
  EXPECT_EQ(d.alpha, 1.0);
  EXPECT_EQ(d.beta, 0.0);
  EXPECT_EQ(d.mu, 2.0);
  EXPECT_EQ(d.gamma, 0.5);
  EXPECT_EQ(d.max(), 2.0);
}

}  // namespace
}  // namespace spinpulse
