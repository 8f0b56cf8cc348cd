#pragma once

// Test-only reference implementations. Nothing here calls into the library:
// Fock vectors are built by dense exponentials of the truncated generators,
// spin branches are evolved one by one, and the two-qubit negativity is
// evaluated from the eigenvalues of an explicitly transposed 4x4 matrix.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace reference {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat4 = Eigen::Matrix4cd;

inline Mat lowering(int n) {
  Mat a = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

// exp(-i H t) for Hermitian H.
inline Mat unitary(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd& e = es.eigenvalues();
  Vec phases(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) phases(k) = std::exp(cplx(0.0, -e(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(K) for anti-Hermitian K, via the Hermitian matrix iK.
inline Mat exp_antihermitian(const Mat& k) {
  const Mat h = cplx(0.0, 1.0) * k;
  return unitary(h, 1.0);
}

// |alpha> from the Poisson amplitudes.
inline Vec coherent(cplx alpha, int n) {
  Vec v(n);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int k = 0; k < n; ++k) {
    v(k) = c;
    c *= alpha / std::sqrt(double(k + 1));
  }
  return v;
}

inline Mat displacement(cplx beta, int n) {
  const Mat a = lowering(n);
  return exp_antihermitian(beta * a.adjoint() - std::conj(beta) * a);
}

// S(xi) = exp((conj(xi) a^2 - xi a^dag^2) / 2)
inline Mat squeeze(cplx xi, int n) {
  const Mat a = lowering(n);
  const Mat a2 = a * a;
  return exp_antihermitian(0.5 * (std::conj(xi) * a2 - xi * a2.adjoint()));
}

inline double tail(const Vec& v, int keep) {
  double m = 0.0;
  for (Eigen::Index k = keep; k < v.size(); ++k) m += std::norm(v(k));
  return m;
}

// Spin eigenvalues of the two-qubit basis |R0>, |R1>, |L0>, |L1>.
inline int sigma_tp(int index) { return index < 2 ? -1 : +1; }
inline int sigma_qubit(int index) { return index % 2 == 0 ? -1 : +1; }

// Oscillator part seen by spin configuration (sa, sb):
// w a^dag a + (eps + g_a sa + g_b sb)(a + a^dag).
inline Mat branch_hamiltonian(double w, double eps, double g_a, double g_b, int sa, int sb,
                              int n) {
  const Mat a = lowering(n);
  const Mat x = a + a.adjoint();
  return w * a.adjoint() * a + (eps + g_a * sa + g_b * sb) * x;
}

// Reduced TP-qubit state for the product initial state
// |+>_TP |+>_qubit |mediator>, evolved branch by branch.
inline Mat4 reduced_state(double w, double eps, double g_a, double g_b, const Vec& mediator,
                          double t) {
  const int n = int(mediator.size());
  std::vector<Vec> psi(4);
  for (int k = 0; k < 4; ++k) {
    psi[k] = unitary(branch_hamiltonian(w, eps, g_a, g_b, sigma_tp(k), sigma_qubit(k), n), t) *
             mediator;
  }
  Mat4 rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = 0.25 * psi[j].dot(psi[i]);
  return rho;
}

// Transpose on the qubit (second) factor.
inline Mat4 transpose_qubit(const Mat4& rho) {
  Mat4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
  return out;
}

inline double log_negativity(const Mat4& transposed) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (transposed + transposed.adjoint()));
  const double norm1 = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log2(norm1));
}

inline double en_tp_qubit(const Mat4& rho) { return log_negativity(transpose_qubit(rho)); }

// Closed form of the TP-qubit negativity when the mediator has decoupled.
inline double en_decoupled(double g_eff, double t) {
  return std::log2(1.0 + std::fabs(std::sin(2.0 * g_eff * t)));
}

}  // namespace reference
