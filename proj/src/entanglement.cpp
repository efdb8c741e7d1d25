#include "seqent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace seqent {

namespace {

constexpr Complex kI{0.0, 1.0};

// sigma_y (x) sigma_y in the |n2 n1> basis (real).
Matrix4c spin_flip() {
  Matrix4c y = Matrix4c::Zero();
  y(0, 3) = -1.0;
  y(3, 0) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  return y;
}

// +1 / -1 eigenvectors of cos(phi) sx + sin(phi) sy.
Eigen::Vector2cd transverse_eigenvector(double phi, int outcome) {
  const double s = outcome == 0 ? 1.0 : -1.0;
  return Eigen::Vector2cd(1.0, s * std::exp(kI * phi)) / std::numbers::sqrt2;
}

Eigen::Vector2cd z_eigenvector(int outcome) {
  return outcome == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
}

Vector4c product(const Eigen::Vector2cd& n2, const Eigen::Vector2cd& n1) {
  Vector4c v;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) v[2 * a + b] = n2[a] * n1[b];
  return v;
}

Matrix4c projector(const Vector4c& v) { return v * v.adjoint(); }

}  // namespace

// ---------------------------------------------------------------------------

NeutronDensityMatrix NeutronDensityMatrix::from_matrix(const Matrix4c& m, double tol) {
  if (!m.allFinite()) throw ValidationError("density matrix has non-finite entries");
  if (hermiticity_defect(m) > tol) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(m.trace() - Complex{1.0}) > tol) throw ValidationError("density matrix trace is not 1");
  NeutronDensityMatrix rho(m);
  if (rho.eigenvalues().minCoeff() < -tol) throw ValidationError("density matrix is not positive semidefinite");
  return rho;
}

NeutronDensityMatrix NeutronDensityMatrix::from_pure(const Vector4c& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw ValidationError("zero state vector");
  const Vector4c u = psi / n;
  return NeutronDensityMatrix(u * u.adjoint());
}

Eigen::Vector4d NeutronDensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

NeutronDensityMatrix reduce_to_neutrons(const StateVector& state, const SectorBasis& basis) {
  if (state.basis != basis.tag()) throw ValidationError("state is not expressed in " + to_string(basis.tag()));
  if (state.amplitudes.size() != basis.size()) throw ValidationError("state length does not match basis");

  // Group amplitudes by sample configuration; each group is one column of X
  // with rho = X X^dagger.
  const int n = basis.n_sites();
  const SiteMask sample_bits = (SiteMask{1} << n) - 1;
  std::unordered_map<SiteMask, Vector4c> columns;
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const Complex a = state.amplitudes[i];
    if (a == Complex{}) continue;
    const SiteMask mask = basis.config(i).mask();
    const int n1 = static_cast<int>((mask >> n) & 1U);
    const int n2 = static_cast<int>((mask >> (n + 1)) & 1U);
    auto [it, inserted] = columns.try_emplace(mask & sample_bits, Vector4c::Zero());
    it->second[neutron_pair_index(n1, n2)] += a;
  }
  Matrix4c rho = Matrix4c::Zero();
  for (const auto& [sample, col] : columns) rho += col * col.adjoint();
  return NeutronDensityMatrix::from_matrix(rho);
}

NeutronDensityMatrix reduce_to_neutrons(const StateVector& state, const CollectiveBasis& basis) {
  if (state.basis != basis.tag()) throw ValidationError("state is not expressed in " + to_string(basis.tag()));
  if (state.amplitudes.size() != basis.size()) throw ValidationError("state length does not match basis");

  Matrix4c rho = Matrix4c::Zero();
  for (int m = 0; m <= basis.m_max(); ++m) {
    Vector4c col;
    for (int n2 = 0; n2 <= 1; ++n2)
      for (int n1 = 0; n1 <= 1; ++n1) col[neutron_pair_index(n1, n2)] = state.amplitudes[basis.index_of({n1, n2, m})];
    rho += col * col.adjoint();
  }
  return NeutronDensityMatrix::from_matrix(rho);
}

double concurrence(const NeutronDensityMatrix& rho) {
  // With rho = X X^dagger, the Wootters values are the singular values of
  // X^T (sy sy) X; this avoids square roots of roundoff-level eigenvalues.
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho.matrix());
  Eigen::Vector4d w = es.eigenvalues();
  for (int i = 0; i < 4; ++i) w[i] = w[i] < 1e-14 ? 0.0 : std::sqrt(w[i]);
  const Matrix4c x = es.eigenvectors() * w.cast<Complex>().asDiagonal();
  const Matrix4c m = x.transpose() * spin_flip() * x;
  Eigen::JacobiSVD<Matrix4c> svd(m);
  const Eigen::Vector4d s = svd.singularValues();  // descending
  return std::clamp(s[0] - s[1] - s[2] - s[3], 0.0, 1.0);
}

double fidelity(const NeutronDensityMatrix& rho, const Vector4c& psi) {
  const Vector4c u = psi.normalized();
  return (u.adjoint() * rho.matrix() * u)(0, 0).real();
}

// ---------------------------------------------------------------------------

void ClosedFormParams::validate() const {
  if (!(lambda > 0.0)) throw ValidationError("closed form needs lambda > 0");
  if (N < 2) throw ValidationError("closed form needs N >= 2");
  if (!(B_z >= 0.0)) throw ValidationError("closed form needs B_z >= 0");
  if (!(tau >= 0.0)) throw ValidationError("closed form needs tau >= 0");
}

double phi_tilde(double lambda, int N, double B_z) {
  // Equal to sqrt(B^2 - 2 B lambda (N-1) + lambda^2 (N+1)^2).
  const double d = B_z - lambda * (N - 1);
  return std::sqrt(d * d + 4.0 * lambda * lambda * N);
}

double closed_form_concurrence(const ClosedFormParams& p) {
  p.validate();
  const double lam2n = p.lambda * p.lambda * p.N;
  const double d = p.B_z - p.lambda * (p.N - 1);
  const double phi = phi_tilde(p.lambda, p.N, p.B_z);
  if (!(phi > 0.0)) throw NumericalError("phi_tilde vanished");

  // d + phi, computed without cancellation when d < 0.
  const double s = d >= 0.0 ? d + phi : 4.0 * lam2n / (phi - d);
  if (!(s > 0.0)) throw NumericalError("degenerate limit B_z + lambda(1-N) + phi_tilde -> 0");

  const double sin2 = std::pow(std::sin(phi * p.tau), 2);
  const double cos2 = std::pow(std::cos(phi * p.tau), 2);

  // phi^2 + phi (lambda - lambda N + B) - 2 lambda^2 N
  double r1 = d >= 0.0 ? phi * s - 2.0 * lam2n : 2.0 * lam2n * s / (phi - d);
  // phi^2 - 4 lambda^2 N sin^2(phi tau)
  double r2 = d * d + 4.0 * lam2n * cos2;
  for (double* r : {&r1, &r2}) {
    if (*r < -1e-9) throw NumericalError("closed-form radicand negative: outside the formula's validity");
    *r = std::max(*r, 0.0);
  }

  const double c = 8.0 * std::numbers::sqrt2 * lam2n * sin2 / (phi * phi * phi * s) * std::sqrt(r1 * r2);
  return std::clamp(c, 0.0, 1.0);
}

double optimal_field(double lambda, int N) {
  if (N < 2) throw ValidationError("optimal_field needs N >= 2");
  return lambda * (N - 1);
}

double optimal_time(double lambda, int N) {
  if (N < 2) throw ValidationError("optimal_time needs N >= 2");
  if (!(lambda > 0.0)) throw ValidationError("optimal_time needs lambda > 0");
  return std::acos(-1.0 / 3.0) / (4.0 * lambda * std::sqrt(static_cast<double>(N)));
}

double optimal_field_concurrence(double lambda, int N, double tau) {
  const double x = 2.0 * lambda * std::sqrt(static_cast<double>(N)) * tau;
  const double sx = std::sin(x);
  return 2.0 * std::abs(std::cos(x)) * sx * sx;
}

double saturated_peak_concurrence() { return 4.0 / (3.0 * std::sqrt(3.0)); }

Vector4c reference_scattered_state() {
  const double mu = 1.0 / 3.0;
  Vector4c psi = Vector4c::Zero();
  psi[neutron_pair_index(0, 0)] = mu;
  psi[neutron_pair_index(1, 0)] = mu * std::sqrt(6.0) * std::exp(kI * (8.0 * std::numbers::pi / 9.0));
  psi[neutron_pair_index(0, 1)] = mu * std::numbers::sqrt2 * std::exp(-kI * (std::numbers::pi / 2.0));
  return psi;
}

// ---------------------------------------------------------------------------

void WitnessSpec::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw ValidationError("witness amplitudes must be non-negative");
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9)
    throw ValidationError("witness amplitudes must satisfy alpha^2 + beta^2 = 1");
  if (!std::isfinite(phase)) throw ValidationError("witness phase must be finite");
}

WitnessSpec witness_target_for(const NeutronDensityMatrix& rho, WitnessSign sign) {
  const double p01 = rho(1, 1).real();
  const double p10 = rho(2, 2).real();
  const double total = p01 + p10;
  if (!(total > 0.0)) throw ValidationError("state has no single-flip weight to target");
  WitnessSpec w;
  w.alpha = std::sqrt(p01 / total);
  w.beta = std::sqrt(p10 / total);
  const Complex coherence = rho(2, 1);  // xi nu*
  w.phase = std::abs(coherence) > 0.0 ? std::arg(coherence) : 0.0;
  w.sign = sign;
  return w;
}

Matrix4c setting_basis(MeasurementSetting s, double phase) {
  Matrix4c basis;
  for (int o2 = 0; o2 < 2; ++o2) {
    for (int o1 = 0; o1 < 2; ++o1) {
      Vector4c v;
      switch (s) {
        case MeasurementSetting::zz:
          v = product(z_eigenvector(o2), z_eigenvector(o1));
          break;
        case MeasurementSetting::xx:
          v = product(transverse_eigenvector(phase, o2), transverse_eigenvector(0.0, o1));
          break;
        case MeasurementSetting::yy:
          v = product(transverse_eigenvector(phase + std::numbers::pi / 2.0, o2),
                      transverse_eigenvector(std::numbers::pi / 2.0, o1));
          break;
      }
      basis.col(2 * o2 + o1) = v;
    }
  }
  return basis;
}

Eigen::Vector4d setting_weights(const WitnessSpec& w, MeasurementSetting s) {
  const double sign = w.sign == WitnessSign::paper ? 1.0 : -1.0;
  const double ab = sign * w.alpha * w.beta;
  switch (s) {
    case MeasurementSetting::zz:
      return {w.alpha * w.alpha, 0.0, 0.0, w.beta * w.beta};
    case MeasurementSetting::xx:
      return {ab, 0.0, 0.0, ab};
    case MeasurementSetting::yy:
      return {0.0, -ab, -ab, 0.0};
  }
  return Eigen::Vector4d::Zero();
}

Matrix4c witness_matrix(const WitnessSpec& w) {
  w.validate();
  Matrix4c out = Matrix4c::Zero();
  for (auto s : {MeasurementSetting::zz, MeasurementSetting::xx, MeasurementSetting::yy}) {
    const Matrix4c basis = setting_basis(s, w.phase);
    const Eigen::Vector4d weights = setting_weights(w, s);
    for (int k = 0; k < 4; ++k)
      if (weights[k] != 0.0) out += weights[k] * projector(basis.col(k));
  }
  return out;
}

double witness_expectation(const NeutronDensityMatrix& rho, const WitnessSpec& w) {
  return (witness_matrix(w) * rho.matrix()).trace().real();
}

Eigen::Vector4d setting_probabilities(const NeutronDensityMatrix& rho, MeasurementSetting s, double phase) {
  const Matrix4c basis = setting_basis(s, phase);
  Eigen::Vector4d p;
  for (int k = 0; k < 4; ++k) {
    const Vector4c v = basis.col(k);
    p[k] = std::max(0.0, (v.adjoint() * rho.matrix() * v)(0, 0).real());
  }
  return p / p.sum();
}

double measure_witness_exact(const NeutronDensityMatrix& rho, const WitnessSpec& w) {
  w.validate();
  double total = 0.0;
  for (auto s : {MeasurementSetting::zz, MeasurementSetting::xx, MeasurementSetting::yy})
    total += setting_weights(w, s).dot(setting_probabilities(rho, s, w.phase));
  return total;
}

WitnessEstimate measure_witness(const NeutronDensityMatrix& rho, const WitnessSpec& w,
                                std::size_t shots_per_setting, std::uint64_t seed) {
  w.validate();
  if (shots_per_setting < 1) throw ValidationError("need at least one shot per setting");

  std::mt19937_64 rng(seed);
  WitnessEstimate est;
  est.shots_per_setting = shots_per_setting;
  const double shots = static_cast<double>(shots_per_setting);
  double variance = 0.0;

  for (auto s : {MeasurementSetting::zz, MeasurementSetting::xx, MeasurementSetting::yy}) {
    const Eigen::Vector4d p = setting_probabilities(rho, s, w.phase);
    const Eigen::Vector4d weights = setting_weights(w, s);
    auto& counts = est.counts[static_cast<std::size_t>(s)];

    // Multinomial draw as a chain of conditional binomials.
    std::uint64_t remaining = shots_per_setting;
    double remaining_p = 1.0;
    for (int k = 0; k < 4; ++k) {
      std::uint64_t c = remaining;
      if (k < 3) {
        const double q = remaining_p > 0.0 ? std::clamp(p[k] / remaining_p, 0.0, 1.0) : 0.0;
        c = std::binomial_distribution<std::uint64_t>(remaining, q)(rng);
      }
      counts[static_cast<std::size_t>(k)] = c;
      remaining -= c;
      remaining_p -= p[k];
    }

    Eigen::Vector4d freq;
    for (int k = 0; k < 4; ++k) freq[k] = static_cast<double>(counts[static_cast<std::size_t>(k)]) / shots;
    const double mean = weights.dot(freq);
    est.value += mean;
    variance += std::max(0.0, weights.cwiseProduct(weights).dot(freq) - mean * mean) / shots;
  }
  est.std_error = std::sqrt(variance);
  return est;
}

}  // namespace seqent
