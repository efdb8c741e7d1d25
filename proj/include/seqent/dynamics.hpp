#pragma once

// Exact unitary evolution of the sequential two-neutron scattering protocol:
// free evolution tau_f, neutron 1 scatters for tau, free evolution tau_f',
// neutron 2 scatters for tau. Free stages use H0, scattering stages H0 + H_m.

#include <string>
#include <vector>

#include "seqent/entanglement.hpp"
#include "seqent/hamiltonian.hpp"

namespace seqent {

enum class InitialVariant { A, B };

struct InitialStateSpec {
  InitialVariant variant = InitialVariant::A;
  Complex alpha{1.0 / 1.4142135623730951, 0.0};
  Complex beta{1.0 / 1.4142135623730951, 0.0};

  static InitialStateSpec one_magnon();
  static InitialStateSpec all_up(Complex alpha, Complex beta);
  /// All-up sample with alpha = beta = 1/sqrt2, or alpha = 0, beta = 1 once
  /// B_z exceeds the threshold field.
  static InitialStateSpec all_up_for_field(const CouplingParams& p, int n_sites);

  /// Largest total flip number the prepared state reaches.
  int flips_required() const;
  void validate() const;
};

/// B_t = 0.1 lambda N.
double threshold_field(double lambda, int n_sites);

enum class Engine { sector_oracle, collective };

struct ProtocolConfig {
  int n_sites = 4;
  LatticeSpec lattice{LatticeKind::chain_periodic, 4};
  CouplingParams params;
  InitialStateSpec init;
  double tau_f = 0.0;
  double tau = 0.0;
  double tau_f_prime = 0.0;
  Engine engine = Engine::sector_oracle;

  static ProtocolConfig defaults(int n_sites);
  void validate() const;
};

struct StageRecord {
  std::string name;
  double start = 0.0;
  double duration = 0.0;
  double norm = 1.0;
};

struct ProtocolResult {
  StateVector final_state;
  NeutronDensityMatrix neutron_rho;
  std::vector<StageRecord> stage_log;
};

StateVector prepare_initial(const InitialStateSpec& spec, const SectorBasis& basis);
StateVector prepare_initial(const InitialStateSpec& spec, const CollectiveBasis& basis);

/// exp(-i H t) through an eigendecomposition of H; reuse for several times.
class Propagator {
 public:
  explicit Propagator(const HamiltonianMatrix& h);

  StateVector apply(const StateVector& state, double t) const;
  const Eigen::VectorXd& energies() const { return energies_; }
  const CMatrix& eigenvectors() const { return vectors_; }

 private:
  BasisTag basis_;
  Eigen::VectorXd energies_;
  CMatrix vectors_;
};

StateVector evolve(const StateVector& state, const HamiltonianMatrix& h, double t);

ProtocolResult run_protocol(const ProtocolConfig& cfg);

/// Interaction time D / |k_z| in natural units.
double interaction_time_from_kinematics(double D, double k_z);

}  // namespace seqent
