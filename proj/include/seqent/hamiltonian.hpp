#pragma once

// Sample Hamiltonian H0 = -J sum_<ij> s_i.s_j + B_z sum_i sz_i and the
// neutron-sample exchange coupling H_m = V0 + lambda s_m . sum_i s_i, both in
// natural units (hbar = mu_0 = mu_B = m_e = 1). Neutrons do not couple to B_z.

#include <cstdint>
#include <utility>
#include <vector>

#include "seqent/basis.hpp"

namespace seqent {

enum class LatticeKind { chain_open, chain_periodic };

struct LatticeSpec {
  LatticeKind kind = LatticeKind::chain_periodic;
  int n_sites = 0;

  /// Nearest-neighbour pairs: N-1 for an open chain, N for a periodic one.
  std::vector<std::pair<int, int>> bonds() const;
  void validate() const;
};

struct CouplingParams {
  double J = 0.25;
  double lambda = 1.0;
  double B_z = 0.0;
  double V0 = 0.0;

  void validate() const;
};

HamiltonianMatrix build_H0(const SectorBasis& basis, const LatticeSpec& lattice, const CouplingParams& p);

/// Dicke states are eigenstates of the exchange term, so H0 is diagonal here.
/// Requires a periodic chain.
HamiltonianMatrix build_H0(const CollectiveBasis& basis, const LatticeSpec& lattice, const CouplingParams& p);

/// Scattering Hamiltonian for neutron `neutron` (1 or 2); identity on the other.
HamiltonianMatrix build_Hint(const SectorBasis& basis, int neutron, const CouplingParams& p);
HamiltonianMatrix build_Hint(const CollectiveBasis& basis, int neutron, const CouplingParams& p);

/// Monte-Carlo spherical average of Q x (s x Q) = s - Q (Q.s) over random unit
/// vectors Q. `mean_map(a, b)` is the averaged coefficient of s_b in component a.
struct DipoleAverageReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Eigen::Matrix3d mean_map = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d std_error = Eigen::Matrix3d::Zero();
  double c = 0.0;                    // fitted proportionality constant, trace / 3
  double c_std_error = 0.0;          // from the per-diagonal estimates
  double max_offdiag_residual = 0.0;
  double max_diag_deviation = 0.0;   // max |mean_map(a,a) - c|

  /// Averaged vector for a given spin vector.
  Eigen::Vector3d apply(const Eigen::Vector3d& sigma) const { return mean_map * sigma; }
  /// Averaged operator on a spin-1/2, i.e. sum_b mean_map(a,b) sigma_b, for component a.
  Eigen::Matrix2cd averaged_pauli(int component) const;
};

DipoleAverageReport dipole_average_check(std::size_t samples, std::uint64_t seed);

}  // namespace seqent
