#pragma once

// Dense operator algebra on the two spin-1/2 Hilbert space.
//
// Basis ordering is the tensor-product basis |s1 s2> with
// |up up>, |up down>, |down up>, |down down> (index = 2*s1 + s2, up = 0).
// Units: hbar = 1, every operator is dimensionless.

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace spinpulse {

using Complex = std::complex<double>;
using Operator = Eigen::Matrix<Complex, 4, 4>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Tolerance used when a caller hands us an operator that should be Hermitian
/// or traceless.
inline constexpr double kHermitianTolerance = 1e-12;

/// Accepted unitarity defect ||U^dag U - I||_F for gates passed *into* the
/// library. Integrator output is allowed a drift of 1e-10, so inputs get a
/// little headroom above that; matrix_exp itself stays below 1e-12.
inline constexpr double kUnitaryInputTolerance = 1e-9;

/// Real symmetric 3x3 tensor stored as its 6 independent entries.
class SymMat3 {
 public:
  SymMat3() = default;
  SymMat3(double xx, double yy, double zz, double xy, double xz, double yz)
      : v_{xx, yy, zz, xy, xz, yz} {}

  /// Symmetric part (M + M^T)/2 of an arbitrary matrix.
  static SymMat3 from_matrix(const Mat3& m);
  static SymMat3 zero() { return {}; }

  double operator()(int a, int b) const { return v_[index(a, b)]; }
  double& operator()(int a, int b) { return v_[index(a, b)]; }

  Mat3 to_matrix() const;
  double trace() const { return v_[0] + v_[1] + v_[2]; }
  double max_abs() const;

  /// Entries in storage order xx, yy, zz, xy, xz, yz.
  const std::array<double, 6>& entries() const { return v_; }

  SymMat3& operator+=(const SymMat3& o);
  SymMat3& operator-=(const SymMat3& o);
  SymMat3& operator*=(double c);
  friend SymMat3 operator+(SymMat3 a, const SymMat3& b) { return a += b; }
  friend SymMat3 operator-(SymMat3 a, const SymMat3& b) { return a -= b; }
  friend SymMat3 operator*(double c, SymMat3 a) { return a *= c; }
  friend SymMat3 operator*(SymMat3 a, double c) { return a *= c; }
  friend bool operator==(const SymMat3&, const SymMat3&) = default;

 private:
  static int index(int a, int b) {
    if (a == b) return a;
    const int lo = a < b ? a : b;
    const int hi = a < b ? b : a;
    return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
  }
  std::array<double, 6> v_{};
};

/// The 15 real parameters of a traceless Hermitian anisotropy operator
///
///   A = beta.(S1 x S2) + S1.Gamma.S2 + (alpha/2).(S1 - S2) + (mu/2).(S1 + S2).
struct AnisotropyParams {
  static constexpr int kCount = 15;

  Vec3 alpha = Vec3::Zero();
  Vec3 beta = Vec3::Zero();
  Vec3 mu = Vec3::Zero();
  SymMat3 gamma;

  /// Flattened as alpha(3), beta(3), mu(3), gamma entries(6).
  std::array<double, kCount> to_array() const;
  static AnisotropyParams from_array(const std::array<double, kCount>& values);

  double max_abs() const;

  AnisotropyParams& operator+=(const AnisotropyParams& o);
  AnisotropyParams& operator-=(const AnisotropyParams& o);
  AnisotropyParams& operator*=(double c);
  friend AnisotropyParams operator+(AnisotropyParams a, const AnisotropyParams& b) { return a += b; }
  friend AnisotropyParams operator-(AnisotropyParams a, const AnisotropyParams& b) { return a -= b; }
  friend AnisotropyParams operator*(double c, AnisotropyParams a) { return a *= c; }
};

struct GateDistance {
  /// min over phi of ||U - exp(i phi) V||_F.
  double frobenius_phase_free = 0.0;
  /// |Tr(U^dag V)|^2 / 16.
  double fidelity = 1.0;
};

struct SpinOperators {
  std::array<Operator, 3> s1;  // (sigma_a / 2) (x) I
  std::array<Operator, 3> s2;  // I (x) (sigma_a / 2)
};

/// Single-particle spin operators. Built once, shared read-only.
const SpinOperators& spin_operators();

/// S1 . S2; eigenvalues +1/4 (triplet, x3) and -3/4 (singlet).
const Operator& heisenberg_term();

/// Components (S1 x S2)_c = eps_{cab} S1_a S2_b.
const std::array<Operator, 3>& cross_term();

/// The exchange operator P_12 (triplet projector minus singlet projector).
const Operator& swap_gate();

/// Trace-norms of the 15 mutually orthogonal anisotropy generators, obtained
/// from explicit matrix products rather than hand-written constants.
struct GeneratorNorms {
  double cross;     // Tr[(S1xS2)_c^2]
  double diagonal;  // Tr[(S1_a S2_a)^2]
  double offdiag;   // Tr[(S1_a S2_b + S1_b S2_a)^2], a != b
  double one_body;  // Tr[((S1_a -+ S2_a)/2)^2]
  double heisenberg;  // Tr[(S1.S2)^2]
};
const GeneratorNorms& generator_norms();

Operator assemble_anisotropy(const AnisotropyParams& params);

/// Exact left inverse of assemble_anisotropy by trace projection.
/// Throws NotHermitian / NotTraceless.
AnisotropyParams decompose_anisotropy(const Operator& m);

/// exp(-i * scale * H) by Hermitian eigendecomposition. Throws NotHermitian.
Operator matrix_exp(const Operator& h, double scale);

struct LogOptions {
  /// Minimum distance of lambda from 0 and 2*pi, and of every eigenphase
  /// from its branch cut.
  double margin = 0.1;
  double unitarity_tolerance = kUnitaryInputTolerance;
};

/// Hermitian H with exp(-i lambda H) = U, where each eigenphase of U is
/// unwrapped around the corresponding unperturbed phase of lambda S1.S2
/// (-lambda/4 for the three triplet-like eigenvectors, 3 lambda/4 for the
/// singlet-like one).
///
/// Throws NotUnitary, LambdaOutOfRange (lambda within margin of 0 or 2 pi)
/// and BranchAmbiguous (no clear singlet-like eigenvector, degenerate
/// eigenvalues that need different branches, or an eigenphase within
/// margin of its cut).
Operator matrix_log_branched(const Operator& u, double lambda, const LogOptions& options = {});

/// Throws NotUnitary when either input is not unitary.
GateDistance gate_distance(const Operator& u, const Operator& v);

double hermiticity_defect(const Operator& m);
double unitarity_defect(const Operator& u);
bool is_hermitian(const Operator& m, double tol = kHermitianTolerance);

/// Frobenius inner product Tr(A^dag B).
Complex trace_inner(const Operator& a, const Operator& b);

}  // namespace spinpulse
