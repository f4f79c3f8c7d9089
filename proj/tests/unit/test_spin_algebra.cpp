#include "spinpulse/spin_algebra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spinpulse/error.hpp"

namespace spinpulse {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double max_abs(const Operator& m) { return m.cwiseAbs().maxCoeff(); }

TEST(SpinOperators, TracesAndCommutators) {
  const auto& s = spin_operators();
  EXPECT_NEAR(std::abs(s.s1[2].trace()), 0.0, 1e-15);
  EXPECT_NEAR(max_abs(s.s1[0] * s.s1[1] - s.s1[1] * s.s1[0] - kI * s.s1[2]), 0.0, 1e-15);
  // Tr(sigma_x^2 / 4) Tr(I_2) = (1/2) 2
  EXPECT_NEAR((s.s1[0] * s.s1[0]).trace().real(), 1.0, 1e-15);

  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    for (const auto* spin : {&s.s1, &s.s2}) {
      const Operator comm = (*spin)[a] * (*spin)[b] - (*spin)[b] * (*spin)[a];
      EXPECT_LT(max_abs(comm - kI * (*spin)[c]), 1e-15);
    }
  }
  Operator s1_sq = Operator::Zero();
  for (int a = 0; a < 3; ++a) s1_sq += s.s1[a] * s.s1[a];
  EXPECT_LT(max_abs(s1_sq - 0.75 * Operator::Identity()), 1e-15);
}

TEST(SpinOperators, BasisOrdering) {
  // |up down> is index 1: S1z = +1/2, S2z = -1/2.
  const auto& s = spin_operators();
  EXPECT_DOUBLE_EQ(s.s1[2](1, 1).real(), 0.5);
  EXPECT_DOUBLE_EQ(s.s2[2](1, 1).real(), -0.5);
}

TEST(HeisenbergTerm, Spectrum) {
  const Operator& h = heisenberg_term();
  Eigen::SelfAdjointEigenSolver<Operator> eig(h);
  EXPECT_NEAR(eig.eigenvalues()[0], -0.75, 1e-15);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(eig.eigenvalues()[k], 0.25, 1e-15);
  EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-15);

  Eigen::Vector4cd up_down = Eigen::Vector4cd::Zero();
  up_down[1] = 1.0;
  const Eigen::Vector4cd out = h * up_down;
  EXPECT_NEAR(out[1].real(), -0.25, 1e-15);
  EXPECT_NEAR(out[2].real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(out[0]) + std::abs(out[3]), 0.0, 1e-15);
}

TEST(HeisenbergTerm, SwapRelation) {
  // P_12 = 2 S1.S2 + 1/2
  EXPECT_LT(max_abs(swap_gate() - (2.0 * heisenberg_term() + 0.5 * Operator::Identity())), 1e-15);
}

TEST(GeneratorNorms, BruteForceTraces) {
  const auto& n = generator_norms();
  EXPECT_NEAR(n.cross, 0.5, 1e-15);
  EXPECT_NEAR(n.diagonal, 0.25, 1e-15);
  EXPECT_NEAR(n.offdiag, 0.5, 1e-15);
  EXPECT_NEAR(n.one_body, 0.5, 1e-15);
  EXPECT_NEAR(n.heisenberg, 0.75, 1e-15);

  // Every axis shares the representative norm.
  const auto& x = cross_term();
  for (int c = 0; c < 3; ++c) EXPECT_NEAR((x[c] * x[c]).trace().real(), n.cross, 1e-15);
}

TEST(Anisotropy, AssembleBasics) {
  EXPECT_LT(max_abs(assemble_anisotropy({})), 1e-300);

  AnisotropyParams p;
  p.beta = Vec3(0.0, 0.0, 0.7);
  const auto& s = spin_operators();
  const Operator expected = 0.7 * (s.s1[0] * s.s2[1] - s.s1[1] * s.s2[0]);
  EXPECT_LT(max_abs(assemble_anisotropy(p) - expected), 1e-15);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Operator m = assemble_anisotropy(testing::random_params(rng, 1.0));
    EXPECT_LT(std::abs(m.trace()), 1e-14);
    EXPECT_TRUE(is_hermitian(m, 1e-14));
  }
}

TEST(Anisotropy, DecomposeOneBodyDifference) {
  const auto& s = spin_operators();
  const AnisotropyParams p = decompose_anisotropy(s.s1[2] - s.s2[2]);
  EXPECT_NEAR(p.alpha.z(), 2.0, 1e-15);
  AnisotropyParams rest = p;
  rest.alpha.z() = 0.0;
  EXPECT_LT(rest.max_abs(), 1e-15);
}

TEST(Anisotropy, RoundTripProperty) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    const AnisotropyParams p = testing::random_params(rng, 1.0);
    const AnisotropyParams back = decompose_anisotropy(assemble_anisotropy(p));
    ASSERT_LT((back - p).max_abs(), 1e-13) << "sample " << i;
  }
}

TEST(Anisotropy, AssembleInvertsDecompose) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    // Random traceless Hermitian matrix.
    Operator z = testing::random_unitary(rng);
    Operator m = z + z.adjoint();
    m -= (m.trace() / 4.0) * Operator::Identity();
    EXPECT_LT(max_abs(assemble_anisotropy(decompose_anisotropy(m)) - m), 1e-14);
  }
}

TEST(Anisotropy, DecomposeErrors) {
  Operator not_hermitian = Operator::Zero();
  not_hermitian(0, 1) = 1.0;
  try {
    decompose_anisotropy(not_hermitian);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
  try {
    decompose_anisotropy(Operator::Identity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTraceless);
  }
}

TEST(Anisotropy, InversionSymmetryOfBlocks) {
  // Conjugation by SWAP exchanges particle labels.
  std::mt19937_64 rng(11);
  const Operator& p12 = swap_gate();
  for (int i = 0; i < 20; ++i) {
    const AnisotropyParams p = testing::random_params(rng, 1.0);
    const AnisotropyParams q = decompose_anisotropy(p12 * assemble_anisotropy(p) * p12);
    EXPECT_LT((q.beta + p.beta).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((q.alpha + p.alpha).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((q.mu - p.mu).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((q.gamma - p.gamma).max_abs(), 1e-14);
  }
}

TEST(MatrixExp, SwapAndRootOfSwap) {
  const Operator u = matrix_exp(heisenberg_term(), kPi);
  const Complex phase = std::polar(1.0, -kPi / 4.0);
  EXPECT_LT(max_abs(u - phase * swap_gate()), 1e-15);

  EXPECT_LT(max_abs(matrix_exp(heisenberg_term(), 0.0) - Operator::Identity()), 1e-15);

  const Operator root = matrix_exp(heisenberg_term(), kPi / 2.0);
  EXPECT_LT(max_abs(root * root - u), 1e-15);
}

TEST(MatrixExp, UnitarityProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const AnisotropyParams p = testing::random_params(rng, 1.0);
    Operator h = heisenberg_term() + assemble_anisotropy(p);
    const double norm = h.norm();
    const double s = scale(rng) / norm;  // ||s H|| <= 20
    EXPECT_LE(unitarity_defect(matrix_exp(h, s)), 1e-12);
  }
}

TEST(MatrixExp, RejectsNonHermitian) {
  Operator m = Operator::Zero();
  m(0, 1) = 1.0;
  EXPECT_THROW(matrix_exp(m, 1.0), Error);
}

TEST(MatrixLog, InvertsUnperturbedGate) {
  const Operator u = matrix_exp(heisenberg_term(), kPi / 2.0);
  EXPECT_LT(max_abs(matrix_log_branched(u, kPi / 2.0) - heisenberg_term()), 1e-14);
}

TEST(MatrixLog, SmallPerturbationAtSwap) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const Operator h = heisenberg_term() + assemble_anisotropy(testing::random_params(rng, 0.05));
    EXPECT_LT(max_abs(matrix_log_branched(matrix_exp(h, kPi), kPi) - h), 1e-12);
  }
}

TEST(MatrixLog, ExpLogConsistencyProperty) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> lam(0.2, 2.0 * kPi - 0.2);
  for (int i = 0; i < 500; ++i) {
    const double lambda = lam(rng);
    const Operator h = heisenberg_term() + assemble_anisotropy(testing::random_params(rng, 0.1));
    const Operator back = matrix_log_branched(matrix_exp(h, lambda), lambda);
    ASSERT_LT(max_abs(back - h), 1e-11) << "lambda " << lambda;
  }
}

TEST(MatrixLog, IdentityIsAmbiguous) {
  try {
    matrix_log_branched(Operator::Identity(), kPi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BranchAmbiguous);
  }
}

TEST(MatrixLog, Errors) {
  const Operator u = matrix_exp(heisenberg_term(), 1.0);
  for (double bad : {0.05, 2.0 * kPi - 0.05, -1.0, 7.0}) {
    try {
      matrix_log_branched(u, bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::LambdaOutOfRange);
    }
  }
  try {
    matrix_log_branched(2.0 * u, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitary);
  }
}

TEST(GateDistance, Basics) {
  std::mt19937_64 rng(1);
  const Operator u = testing::random_unitary(rng);
  GateDistance d = gate_distance(u, u);
  EXPECT_NEAR(d.fidelity, 1.0, 1e-15);
  EXPECT_NEAR(d.frobenius_phase_free, 0.0, 1e-14);

  for (double theta : {0.3, -2.0, 3.1}) {
    d = gate_distance(u, std::polar(1.0, theta) * u);
    EXPECT_NEAR(d.fidelity, 1.0, 1e-14);
    EXPECT_LT(d.frobenius_phase_free, 1e-14);
  }

  d = gate_distance(Operator::Identity(), swap_gate());
  EXPECT_NEAR(d.fidelity, 0.25, 1e-15);
  EXPECT_THROW(gate_distance(2.0 * u, u), Error);
}

TEST(GateDistance, PseudometricProperty) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const Operator a = testing::random_unitary(rng);
    const Operator b = testing::random_unitary(rng);
    const Operator c = testing::random_unitary(rng);
    const double ab = gate_distance(a, b).frobenius_phase_free;
    const double ba = gate_distance(b, a).frobenius_phase_free;
    const double bc = gate_distance(b, c).frobenius_phase_free;
    const double ac = gate_distance(a, c).frobenius_phase_free;
    EXPECT_NEAR(ab, ba, 1e-13);
    EXPECT_LE(ac, ab + bc + 1e-13);
    EXPECT_GT(ab, 1e-6);
    // The minimizing phase really is the minimum.
    for (double phi : {0.1, 1.0, 2.5}) {
      EXPECT_LE(ab, (a - std::polar(1.0, phi) * b).norm() + 1e-13);
    }
  }
}

}  // namespace
}  // namespace spinpulse
