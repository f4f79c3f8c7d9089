#include "spinpulse/propagator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spinpulse/error.hpp"

namespace spinpulse {
namespace {

constexpr double kPi = std::numbers::pi;

double phase_free(const Operator& a, const Operator& b) {
  return gate_distance(a, b).frobenius_phase_free;
}

TEST(Hamiltonian, IsotropicPeak) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const Operator h = hamiltonian_at(p, AnisotropyProfile::isotropic(), 0.0);
  EXPECT_LT((h - heisenberg_term()).norm(), 1e-15);
}

TEST(Hamiltonian, TracelessHermitian) {
  std::mt19937_64 rng(3);
  const PulseProfile p = PulseProfile::sech2(1.2, 2.0, 0.5);
  const AnisotropyProfile a = AnisotropyProfile::linear(Vec3(0.02, -0.01, 0.03), RotatedExchange{});
  std::uniform_real_distribution<double> t(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Operator h = hamiltonian_at(p, a, t(rng));
    EXPECT_LT(std::abs(h.trace()), 1e-15);
    EXPECT_TRUE(is_hermitian(h));
  }
}

TEST(Hamiltonian, AxialSymmetry) {
  const PulseProfile p = PulseProfile::sech2(1.0, 3.0);
  const AnisotropyProfile a = AnisotropyProfile::linear(Vec3(0.0, 0.0, 0.04), RotatedExchange{});
  const SpinOperators s = spin_operators();
  const Operator sz = s.s1[2] + s.s2[2];
  for (double t : {-2.0, -0.3, 0.0, 0.7, 4.0}) {
    const Operator h = hamiltonian_at(p, a, t);
    EXPECT_LT((h * sz - sz * h).norm(), 1e-13);
  }
}

TEST(Propagate, SwapAtPi) {
  const PropagationResult r = propagate(PulseProfile::sech2(1.0, kPi), {}, 1e-11);
  const Operator expected = std::exp(Complex(0.0, -kPi / 4.0)) * swap_gate();
  EXPECT_LT((r.gate - expected).norm(), 1e-10);
  EXPECT_LE(r.unitarity_drift, kMaxUnitarityDrift);
  EXPECT_LT(r.estimated_error, 1e-11);
  EXPECT_FALSE(r.refinement_history.empty());
  EXPECT_EQ(r.refinement_history.back(), r.estimated_error);
}

TEST(Propagate, IsotropicMatchesClosedForm) {
  for (double lambda : {0.3, 1.0, 2.5, 4.0, 6.0, 9.0}) {
    const PulseProfile p = PulseProfile::sech2(lambda / 2.0, 2.0, 0.3);
    const PropagationResult r = propagate(p, {}, 1e-11);
    EXPECT_LT((r.gate - unperturbed_full_gate(p)).norm(), 1e-10) << lambda;
  }
}

TEST(Propagate, CommutingIsotropicGamma) {
  // Gamma proportional to the identity only renormalizes S1.S2; int J^2 dt / J0 = (2/3) lambda.
  const PulseProfile p = PulseProfile::sech2(1.0, 2.0);
  AnisotropyProfile a;
  a.gamma = ProportionalToJ{SymMat3(0.01, 0.01, 0.01, 0.0, 0.0, 0.0)};
  const PropagationResult r = propagate(p, a, 1e-11);
  EXPECT_LT((r.gate - matrix_exp(heisenberg_term(), (1.0 + 0.02 / 3.0) * p.lambda())).norm(), 1e-10);
}

TEST(Propagate, ZeroPulse) {
  const PulseProfile p = PulseProfile::tabulated({-1.0, 0.0, 1.0, 2.0}, {0.0, 0.0, 0.0, 0.0});
  const PropagationResult r = propagate(p, {}, 1e-11);
  EXPECT_LT((r.gate - Operator::Identity()).norm(), 1e-15);
}

TEST(Propagate, ToleranceRange) {
  const PulseProfile p = PulseProfile::sech2(1.0, 1.0);
  for (double bad : {1e-14, 1e-5, 0.0, -1.0}) {
    try {
      propagate(p, {}, bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
  }
}

TEST(Propagate, StepCap) {
  PropagationOptions o;
  o.tol = 1e-13;
  o.max_steps = 256;
  try {
    propagate(PulseProfile::sech2(1.0, kPi), AnisotropyProfile::linear(Vec3(0.01, 0, 0)), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(Propagate, DeterminantIsOne) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lam(0.5, 6.0);
  for (int i = 0; i < 8; ++i) {
    const PulseProfile p = PulseProfile::sech2(lam(rng) / 2.0, 2.0);
    const AnisotropyProfile a = AnisotropyProfile::linear(testing::random_vec3(rng, 0.05), RotatedExchange{});
    const PropagationResult r = propagate(p, a, 1e-11);
    EXPECT_NEAR(std::abs(r.gate.determinant() - Complex(1.0, 0.0)), 0.0, 1e-10);
  }
}

TEST(Propagate, FourthOrderConvergence) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const AnisotropyProfile a = AnisotropyProfile::linear(Vec3(0.02, 0.01, -0.03), RotatedExchange{});
  const PropagationResult r = propagate(p, a, 1e-13);
  const auto& h = r.refinement_history;
  ASSERT_GE(h.size(), 3u);
  // last pair still well above round-off
  std::size_t k = h.size() - 1;
  while (k > 1 && h[k] < 1e-10) --k;
  const double ratio = h[k - 1] / h[k];
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Propagate, ShiftInvariance) {
  const AnisotropyProfile a = AnisotropyProfile::linear(Vec3(0.03, 0.0, 0.01), RotatedExchange{});
  const PulseProfile p = PulseProfile::sech2(0.9, 2.6);
  const Operator u = propagate(p, a, 1e-11).gate;
  for (double dt : {-3.0, 0.5, 7.25}) {
    EXPECT_LT(phase_free(u, propagate(p.shifted(dt), a, 1e-11).gate), 1e-10) << dt;
  }
}

TEST(Propagate, InteractionPictureRoute) {
  std::mt19937_64 rng(5);
  for (double lambda : {1.0, kPi, 5.0}) {
    const PulseProfile p = PulseProfile::sech2(lambda / kPi, kPi);
    const AnisotropyProfile a = AnisotropyProfile::linear(testing::random_vec3(rng, 0.04), RotatedExchange{});
    const double tol = 1e-11;
    const PropagationResult r = propagate(p, a, tol);
    const Operator via_interaction = testing::interaction_picture_gate(p, a, 2 * r.steps_used);
    EXPECT_LT((r.gate - via_interaction).norm(), 10.0 * tol) << lambda;
  }
}

TEST(Unperturbed, Limits) {
  const PulseProfile p = PulseProfile::sech2(1.4, 1.7, 0.2);
  EXPECT_LT((unperturbed_gate(p, 1e4) - matrix_exp(heisenberg_term(), p.lambda())).norm(), 1e-14);
  EXPECT_LT((unperturbed_gate(p, -1e4) - Operator::Identity()).norm(), 1e-15);
  EXPECT_LT((unperturbed_full_gate(p) - matrix_exp(heisenberg_term(), p.lambda())).norm(), 1e-15);
}

TEST(Unperturbed, AgreesWithPartialPropagation) {
  const PulseProfile p = PulseProfile::sech2(1.0, 2.5);
  const TimeGrid w = p.window();
  auto h = [&](double t) { return hamiltonian_at(p, {}, t); };
  for (double t_end : {-1.0, 0.0, 0.8, 2.0}) {
    const Operator partial = rk4_evolve(h, w.t_min, t_end, 8192);
    EXPECT_LT((partial - unperturbed_gate(p, t_end)).norm(), 1e-11) << t_end;
  }
}

}  // namespace
}  // namespace spinpulse
