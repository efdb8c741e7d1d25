#pragma once

// Two-neutron entanglement: reduced density matrix, Wootters concurrence,
// closed-form results for the one-magnon initial state, and the three-setting
// entanglement witness.
//
// Neutron ordering is |n2 n1>: the 4x4 index of a product state is
// 2 * n2 + n1, so |01> means neutron 1 flipped and |10> means neutron 2
// flipped.

#include <array>
#include <cstdint>

#include "seqent/basis.hpp"

namespace seqent {

constexpr int neutron_pair_index(int n1, int n2) { return 2 * n2 + n1; }

class NeutronDensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity to `tol`.
  static NeutronDensityMatrix from_matrix(const Matrix4c& m, double tol = 1e-10);
  static NeutronDensityMatrix from_pure(const Vector4c& psi);

  const Matrix4c& matrix() const { return rho_; }
  Complex operator()(int r, int c) const { return rho_(r, c); }

  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }
  Eigen::Vector4d eigenvalues() const;

 private:
  explicit NeutronDensityMatrix(const Matrix4c& m) : rho_(m) {}
  Matrix4c rho_;
};

/// Partial trace over the sample.
NeutronDensityMatrix reduce_to_neutrons(const StateVector& state, const SectorBasis& basis);
NeutronDensityMatrix reduce_to_neutrons(const StateVector& state, const CollectiveBasis& basis);

double concurrence(const NeutronDensityMatrix& rho);

/// Fidelity <psi| rho |psi> with a pure state, insensitive to global phase.
double fidelity(const NeutronDensityMatrix& rho, const Vector4c& psi);

// -- closed-form results for the one-magnon initial state ---------------------

struct ClosedFormParams {
  double lambda = 1.0;
  int N = 2;
  double B_z = 0.0;
  double tau = 0.0;

  void validate() const;
};

/// Oscillation frequency sqrt(B^2 - 2 B lambda (N-1) + lambda^2 (N+1)^2).
double phi_tilde(double lambda, int N, double B_z);

double closed_form_concurrence(const ClosedFormParams& p);

/// B_z* = lambda (N - 1).
double optimal_field(double lambda, int N);

/// tau* = arccos(-1/3) / (4 lambda sqrt(N)).
double optimal_time(double lambda, int N);

/// Concurrence at the optimal field: 2 |cos x| sin^2 x with x = 2 lambda sqrt(N) tau.
double optimal_field_concurrence(double lambda, int N, double tau);

/// 4 / (3 sqrt 3), the maximum of 2 |cos x| sin^2 x.
double saturated_peak_concurrence();

/// mu|00> + nu|01> + xi|10> with |mu|^2 : |nu|^2 : |xi|^2 = 1 : 6 : 2,
/// nu/mu = sqrt6 e^{i 8pi/9} and xi/mu = sqrt2 e^{-i pi/2}, mu real positive.
Vector4c reference_scattered_state();

// -- witness ------------------------------------------------------------------

/// `paper` adds the alpha beta cross term with a plus sign, `corrected` subtracts it.
enum class WitnessSign { paper, corrected };

/// Target alpha|01> + beta e^{i phase}|10>. The phase rotates neutron 2's
/// transverse analyzer axes; phase = 0 gives the standard x/y settings.
struct WitnessSpec {
  double alpha = 1.0 / 1.4142135623730951;
  double beta = 1.0 / 1.4142135623730951;
  double phase = 0.0;
  WitnessSign sign = WitnessSign::corrected;

  void validate() const;
};

/// Target amplitudes and phase matched to the single-flip coherence of rho.
WitnessSpec witness_target_for(const NeutronDensityMatrix& rho, WitnessSign sign = WitnessSign::corrected);

/// Built from rank-1 projectors onto local eigenstate products:
/// alpha^2 P(z+z+) + beta^2 P(z-z-) +/- alpha beta (P(x+x+) + P(x-x-) - P(y+y-) - P(y-y+)).
Matrix4c witness_matrix(const WitnessSpec& w);

/// Tr(W rho).
double witness_expectation(const NeutronDensityMatrix& rho, const WitnessSpec& w);

enum class MeasurementSetting { zz = 0, xx = 1, yy = 2 };

/// Product measurement basis for a setting, columns indexed 2 * o2 + o1 with
/// outcome 0 = "+" and 1 = "-".
Matrix4c setting_basis(MeasurementSetting s, double phase);

/// Joint outcome probabilities for one setting.
Eigen::Vector4d setting_probabilities(const NeutronDensityMatrix& rho, MeasurementSetting s, double phase);

/// Weights that turn a setting's outcome frequencies into its share of Tr(W rho).
Eigen::Vector4d setting_weights(const WitnessSpec& w, MeasurementSetting s);

struct WitnessEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t shots_per_setting = 0;
  std::array<std::array<std::uint64_t, 4>, 3> counts{};
};

/// Infinite-shot estimate, assembled from setting probabilities.
double measure_witness_exact(const NeutronDensityMatrix& rho, const WitnessSpec& w);

/// Shot-noise simulation of the three-setting measurement. Deterministic for a
/// given seed.
WitnessEstimate measure_witness(const NeutronDensityMatrix& rho, const WitnessSpec& w,
                                std::size_t shots_per_setting, std::uint64_t seed);

}  // namespace seqent
