#include "spinpulse/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spinpulse/error.hpp"

namespace spinpulse {
namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix2cd pauli(int axis) {
  Eigen::Matrix2cd s;
  switch (axis) {
    case 0: s << 0.0, 1.0, 1.0, 0.0; break;
    case 1: s << 0.0, -kI, kI, 0.0; break;
    default: s << 1.0, 0.0, 0.0, -1.0; break;
  }
  return s;
}

Operator kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Operator out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

double real_trace(const Operator& a) { return a.trace().real(); }

/// (-pi, pi]
double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(phi, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// SymMat3 / AnisotropyParams

SymMat3 SymMat3::from_matrix(const Mat3& m) {
  return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
          0.5 * (m(1, 2) + m(2, 1))};
}

Mat3 SymMat3::to_matrix() const {
  Mat3 m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m(a, b) = (*this)(a, b);
  return m;
}

double SymMat3::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

SymMat3& SymMat3::operator+=(const SymMat3& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

SymMat3& SymMat3::operator-=(const SymMat3& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

SymMat3& SymMat3::operator*=(double c) {
  for (double& v : v_) v *= c;
  return *this;
}

std::array<double, AnisotropyParams::kCount> AnisotropyParams::to_array() const {
  std::array<double, kCount> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = alpha[i];
    out[3 + i] = beta[i];
    out[6 + i] = mu[i];
  }
  for (int i = 0; i < 6; ++i) out[9 + i] = gamma.entries()[i];
  return out;
}

AnisotropyParams AnisotropyParams::from_array(const std::array<double, kCount>& values) {
  AnisotropyParams p;
  for (int i = 0; i < 3; ++i) {
    p.alpha[i] = values[i];
    p.beta[i] = values[3 + i];
    p.mu[i] = values[6 + i];
  }
  p.gamma = SymMat3(values[9], values[10], values[11], values[12], values[13], values[14]);
  return p;
}

double AnisotropyParams::max_abs() const {
  double m = 0.0;
  for (double v : to_array()) m = std::max(m, std::abs(v));
  return m;
}

AnisotropyParams& AnisotropyParams::operator+=(const AnisotropyParams& o) {
  alpha += o.alpha;
  beta += o.beta;
  mu += o.mu;
  gamma += o.gamma;
  return *this;
}

AnisotropyParams& AnisotropyParams::operator-=(const AnisotropyParams& o) {
  alpha -= o.alpha;
  beta -= o.beta;
  mu -= o.mu;
  gamma -= o.gamma;
  return *this;
}

AnisotropyParams& AnisotropyParams::operator*=(double c) {
  alpha *= c;
  beta *= c;
  mu *= c;
  gamma *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// Generators

const SpinOperators& spin_operators() {
  static const SpinOperators ops = [] {
    SpinOperators s;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (int a = 0; a < 3; ++a) {
      s.s1[a] = kron(0.5 * pauli(a), id);
      s.s2[a] = kron(id, 0.5 * pauli(a));
    }
    return s;
  }();
  return ops;
}

const Operator& heisenberg_term() {
  static const Operator h = [] {
    const auto& s = spin_operators();
    Operator out = Operator::Zero();
    for (int a = 0; a < 3; ++a) out += s.s1[a] * s.s2[a];
    return out;
  }();
  return h;
}

const std::array<Operator, 3>& cross_term() {
  static const std::array<Operator, 3> x = [] {
    const auto& s = spin_operators();
    std::array<Operator, 3> out;
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3;
      const int b = (c + 2) % 3;
      out[c] = s.s1[a] * s.s2[b] - s.s1[b] * s.s2[a];
    }
    return out;
  }();
  return x;
}

const Operator& swap_gate() {
  static const Operator p = [] {
    Operator out = Operator::Zero();
    out(0, 0) = 1.0;
    out(1, 2) = 1.0;
    out(2, 1) = 1.0;
    out(3, 3) = 1.0;
    return out;
  }();
  return p;
}

const GeneratorNorms& generator_norms() {
  static const GeneratorNorms norms = [] {
    const auto& s = spin_operators();
    const auto& x = cross_term();
    const Operator diag = s.s1[2] * s.s2[2];
    const Operator off = s.s1[0] * s.s2[1] + s.s1[1] * s.s2[0];
    const Operator diff = 0.5 * (s.s1[0] - s.s2[0]);
    GeneratorNorms n{};
    n.cross = real_trace(x[2] * x[2]);
    n.diagonal = real_trace(diag * diag);
    n.offdiag = real_trace(off * off);
    n.one_body = real_trace(diff * diff);
    n.heisenberg = real_trace(heisenberg_term() * heisenberg_term());
    return n;
  }();
  return norms;
}

namespace {

// S1_a S2_b, reused by every Hamiltonian evaluation.
const std::array<std::array<Operator, 3>, 3>& pair_products() {
  static const auto products = [] {
    const auto& s = spin_operators();
    std::array<std::array<Operator, 3>, 3> out;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) out[a][b] = s.s1[a] * s.s2[b];
    return out;
  }();
  return products;
}

}  // namespace

Operator assemble_anisotropy(const AnisotropyParams& p) {
  const auto& s = spin_operators();
  const auto& x = cross_term();
  const auto& pairs = pair_products();
  Operator out = Operator::Zero();
  for (int c = 0; c < 3; ++c) out += p.beta[c] * x[c];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out += p.gamma(a, b) * pairs[a][b];
  for (int a = 0; a < 3; ++a) {
    out += (0.5 * p.alpha[a]) * (s.s1[a] - s.s2[a]);
    out += (0.5 * p.mu[a]) * (s.s1[a] + s.s2[a]);
  }
  return out;
}

AnisotropyParams decompose_anisotropy(const Operator& m) {
  if (!is_hermitian(m)) {
    throw Error(ErrorCode::NotHermitian,
                "decompose_anisotropy: defect " + std::to_string(hermiticity_defect(m)));
  }
  if (std::abs(m.trace()) > kHermitianTolerance) {
    throw Error(ErrorCode::NotTraceless,
                "decompose_anisotropy: trace " + std::to_string(std::abs(m.trace())));
  }
  const auto& s = spin_operators();
  const auto& x = cross_term();
  const auto& n = generator_norms();
  // Tr(M G) is real for Hermitian M and G.
  auto project = [&](const Operator& g, double norm) { return real_trace(m * g) / norm; };

  AnisotropyParams p;
  for (int c = 0; c < 3; ++c) p.beta[c] = project(x[c], n.cross);
  for (int a = 0; a < 3; ++a) {
    p.gamma(a, a) = project(s.s1[a] * s.s2[a], n.diagonal);
    for (int b = a + 1; b < 3; ++b)
      p.gamma(a, b) = project(s.s1[a] * s.s2[b] + s.s1[b] * s.s2[a], n.offdiag);
    p.alpha[a] = project(0.5 * (s.s1[a] - s.s2[a]), n.one_body);
    p.mu[a] = project(0.5 * (s.s1[a] + s.s2[a]), n.one_body);
  }
  return p;
}

// ---------------------------------------------------------------------------
// exp / log

Operator matrix_exp(const Operator& h, double scale) {
  if (!is_hermitian(h)) {
    throw Error(ErrorCode::NotHermitian,
                "matrix_exp: defect " + std::to_string(hermiticity_defect(h)));
  }
  // Feed the solver an exactly Hermitian matrix.
  const Operator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> eig(sym);
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases[k] = std::exp(-kI * (scale * eig.eigenvalues()[k]));
  const auto& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Operator matrix_log_branched(const Operator& u, double lambda, const LogOptions& options) {
  constexpr double pi = std::numbers::pi;
  const double drift = unitarity_defect(u);
  if (!(drift <= options.unitarity_tolerance)) {
    throw Error(ErrorCode::NotUnitary, "matrix_log_branched: drift " + std::to_string(drift));
  }
  if (!(lambda >= options.margin && lambda <= 2.0 * pi - options.margin)) {
    throw Error(ErrorCode::LambdaOutOfRange,
                "matrix_log_branched: lambda " + std::to_string(lambda) + " outside (" +
                    std::to_string(options.margin) + ", 2pi - " + std::to_string(options.margin) +
                    ")");
  }

  // Schur vectors of a (numerically) normal matrix are its eigenvectors and
  // stay orthonormal through degeneracies.
  Eigen::ComplexSchur<Operator> schur(u);
  const Operator& q = schur.matrixU();
  const Operator& t = schur.matrixT();

  Eigen::Vector4cd singlet(0.0, 1.0, -1.0, 0.0);
  singlet /= std::sqrt(2.0);

  std::array<double, 4> weight{};
  int singlet_index = 0;
  for (int k = 0; k < 4; ++k) {
    weight[k] = std::norm(singlet.dot(q.col(k)));
    if (weight[k] > weight[singlet_index]) singlet_index = k;
  }
  if (!(weight[singlet_index] > 0.5)) {
    throw Error(ErrorCode::BranchAmbiguous,
                "matrix_log_branched: no eigenvector is predominantly singlet (max weight " +
                    std::to_string(weight[singlet_index]) + ")");
  }
  for (int k = 0; k < 4; ++k) {
    if (k != singlet_index && std::abs(t(k, k) - t(singlet_index, singlet_index)) < 1e-8) {
      throw Error(ErrorCode::BranchAmbiguous,
                  "matrix_log_branched: singlet-like and triplet-like eigenvalues coincide");
    }
  }

  Eigen::Vector4d generator_eigs;
  for (int k = 0; k < 4; ++k) {
    const double anchor = (k == singlet_index ? 0.75 : -0.25) * lambda;
    const double offset = wrap_phase(std::arg(t(k, k)) - anchor);
    if (std::abs(offset) > pi - options.margin) {
      throw Error(ErrorCode::BranchAmbiguous,
                  "matrix_log_branched: eigenphase offset " + std::to_string(offset) +
                      " within margin of the branch cut");
    }
    generator_eigs[k] = -(anchor + offset) / lambda;
  }
  const Operator h = q * generator_eigs.cast<Complex>().asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

GateDistance gate_distance(const Operator& u, const Operator& v) {
  const double du = unitarity_defect(u);
  const double dv = unitarity_defect(v);
  if (!(du <= kUnitaryInputTolerance && dv <= kUnitaryInputTolerance)) {
    throw Error(ErrorCode::NotUnitary, "gate_distance: drift " + std::to_string(std::max(du, dv)));
  }
  const Complex overlap = trace_inner(u, v);
  const Complex phase = std::polar(1.0, -std::arg(overlap));
  GateDistance d;
  d.frobenius_phase_free = (u - phase * v).norm();
  d.fidelity = std::min(1.0, std::norm(overlap) / 16.0);
  return d;
}

double hermiticity_defect(const Operator& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double unitarity_defect(const Operator& u) {
  return (u.adjoint() * u - Operator::Identity()).norm();
}

bool is_hermitian(const Operator& m, double tol) { return hermiticity_defect(m) <= tol; }

Complex trace_inner(const Operator& a, const Operator& b) { return (a.adjoint() * b).trace(); }

}  // namespace spinpulse
