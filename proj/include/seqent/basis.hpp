#pragma once

// Hilbert-space bases for N sample spins plus two probe neutrons.
//
// Bit convention: bit i of a configuration mask is set when spin i is flipped
// (spin-down, |1>). Sites 0..N-1 are the sample, site N is neutron 1 and site
// N+1 is neutron 2. Total flip number is conserved by every Hamiltonian in the
// model, so the sector basis keeps only configurations with at most k_max
// flips.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "seqent/types.hpp"

namespace seqent {

using SiteMask = std::uint64_t;

/// Ordered set of flipped sites, stored as a bit mask.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(SiteMask mask) : mask_(mask) {}

  static SpinConfiguration from_sites(const std::vector<int>& sites);

  SiteMask mask() const { return mask_; }
  int flip_count() const;
  bool flipped(int site) const { return (mask_ >> site) & 1U; }
  std::vector<int> flipped_sites() const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  SiteMask mask_ = 0;
};

/// All configurations of N+2 spins with at most k_max flips, ordered by flip
/// count and then lexicographically by the sorted list of flipped sites.
class SectorBasis {
 public:
  static constexpr int kMaxFlips = 2;

  SectorBasis(int n_sites, int k_max);

  int n_sites() const { return n_sites_; }
  int k_max() const { return k_max_; }
  int neutron_site(int neutron) const { return n_sites_ + neutron - 1; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(configs_.size()); }

  const SpinConfiguration& config(Eigen::Index i) const { return configs_.at(static_cast<std::size_t>(i)); }
  const std::vector<SpinConfiguration>& configs() const { return configs_; }

  /// Ordinal of a configuration, or -1 when it lies outside the basis.
  Eigen::Index index_of(SiteMask mask) const;

  BasisTag tag() const { return {BasisKind::sector, n_sites_, k_max_}; }

  /// Sum over j = 0..k_max of C(N+2, j).
  static std::size_t expected_dimension(int n_sites, int k_max);

 private:
  int n_sites_;
  int k_max_;
  std::vector<SpinConfiguration> configs_;
  std::unordered_map<SiteMask, Eigen::Index> index_;
};

struct CollectiveState {
  int neutron1 = 0;  // 0 = up, 1 = flipped
  int neutron2 = 0;
  int magnons = 0;   // symmetric (Dicke) sample flip number

  friend bool operator==(const CollectiveState&, const CollectiveState&) = default;
};

/// neutron 1 x neutron 2 x symmetric magnon number m = 0..m_max.
/// States are ordered (neutron2, neutron1, m) with m fastest.
class CollectiveBasis {
 public:
  CollectiveBasis(int n_sites, int m_max);

  int n_sites() const { return n_sites_; }
  int m_max() const { return m_max_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }

  const CollectiveState& state(Eigen::Index i) const { return states_.at(static_cast<std::size_t>(i)); }
  const std::vector<CollectiveState>& states() const { return states_; }
  Eigen::Index index_of(const CollectiveState& s) const;

  BasisTag tag() const { return {BasisKind::collective, n_sites_, m_max_}; }

 private:
  int n_sites_;
  int m_max_;
  std::vector<CollectiveState> states_;
};

/// Maps a collective-basis vector onto the sector basis, expanding each Dicke
/// state |m> into C(N,m)^{-1/2} times the sum of all m-flip sample
/// configurations.
StateVector embed_collective_in_sector(const StateVector& v, const CollectiveBasis& cb,
                                       const SectorBasis& sb);

double binomial(int n, int k);

}  // namespace seqent
