#pragma once

// Shared helpers for the test binaries: seeded generators for property tests
// and a dense full-Hilbert-space reference implementation that shares no code
// with the library (Kronecker-product operators, no flip-number truncation,
// textbook Wootters formula).

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testsupport {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>()(rng); }
  Eigen::Vector2cd qubit() {
    Eigen::Vector2cd v(cd(normal(), normal()), cd(normal(), normal()));
    return v / v.norm();
  }
  Eigen::Matrix2cd unitary2() {
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a(i, j) = cd(normal(), normal());
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
    return qr.householderQ();
  }
  // Random 4x4 density matrix of rank up to 4.
  Eigen::Matrix4cd density4(int rank = 4) {
    Eigen::MatrixXcd g(4, rank);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < rank; ++j) g(i, j) = cd(normal(), normal());
    Eigen::Matrix4cd rho = g * g.adjoint();
    return rho / rho.trace();
  }
  std::mt19937_64 rng;
};

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli(int axis) {
  Mat p(2, 2);
  const cd i(0, 1);
  if (axis == 0) p << 0, 1, 1, 0;
  if (axis == 1) p << 0, -i, i, 0;
  if (axis == 2) p << 1, 0, 0, -1;
  return p;
}

// Operator acting with `op` on qubit `site` of `n` qubits; qubit k is bit k of
// the basis index (bit set = spin down).
inline Mat site_op(const Mat& op, int site, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) out = kron(out, k == site ? op : Mat::Identity(2, 2));
  return out;
}

struct FullModel {
  int N;
  double J, lambda, B, V0;
  bool periodic = true;

  int qubits() const { return N + 2; }

  Mat H0() const {
    const int n = qubits();
    Mat h = Mat::Zero(1 << n, 1 << n);
    auto bond = [&](int a, int b) {
      for (int ax = 0; ax < 3; ++ax) h -= J * site_op(pauli(ax), a, n) * site_op(pauli(ax), b, n);
    };
    for (int i = 0; i + 1 < N; ++i) bond(i, i + 1);
    if (periodic) bond(N - 1, 0);  // N = 2 ring: the bond appears twice
    for (int i = 0; i < N; ++i) h += B * site_op(pauli(2), i, n);
    return h;
  }

  Mat Hint(int neutron) const {
    const int n = qubits();
    const int s = N + neutron - 1;
    Mat h = V0 * Mat::Identity(1 << n, 1 << n);
    for (int i = 0; i < N; ++i)
      for (int ax = 0; ax < 3; ++ax) h += lambda * site_op(pauli(ax), s, n) * site_op(pauli(ax), i, n);
    return h;
  }
};

inline Vec expm_apply(const Mat& h, const Vec& v, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec phases = (es.eigenvalues().cast<cd>() * cd(0, -t)).array().exp();
  return es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * v));
}

// |W_N> sample, both neutrons up.
inline Vec one_magnon_state(int N) {
  Vec v = Vec::Zero(1 << (N + 2));
  for (int j = 0; j < N; ++j) v(1 << j) = 1.0 / std::sqrt(static_cast<double>(N));
  return v;
}

// All sample spins up, each neutron in a|up> + b|down>.
inline Vec all_up_state(int N, cd a, cd b) {
  Vec v = Vec::Zero(1 << (N + 2));
  for (int n2 = 0; n2 < 2; ++n2)
    for (int n1 = 0; n1 < 2; ++n1) v((n1 << N) | (n2 << (N + 1))) = (n1 ? b : a) * (n2 ? b : a);
  return v;
}

inline Vec run(const FullModel& m, const Vec& psi0, double tau_f, double tau, double tau_fp) {
  const Mat h0 = m.H0();
  Vec v = expm_apply(h0, psi0, tau_f);
  v = expm_apply(h0 + m.Hint(1), v, tau);
  v = expm_apply(h0, v, tau_fp);
  return expm_apply(h0 + m.Hint(2), v, tau);
}

// Neutron pair index 2*n2 + n1 is just the top two bits of the full index.
inline Eigen::Matrix4cd neutron_rho(const Vec& psi, int N) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const Eigen::Index sample_dim = Eigen::Index{1} << N;
  for (Eigen::Index s = 0; s < sample_dim; ++s)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) rho(a, b) += psi((Eigen::Index{a} << N) | s) * std::conj(psi((Eigen::Index{b} << N) | s));
  return rho;
}

// Textbook Wootters: square roots of the eigenvalues of rho (sy sy) rho* (sy sy).
inline double wootters(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = kron(pauli(1), pauli(1));
  Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Bisection on a bracketing interval of a continuous function.
template <typename F>
double bisect(F f, double lo, double hi, double tol = 1e-14) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) lo = mid, flo = fm;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace testsupport
