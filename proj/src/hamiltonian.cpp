#include "seqent/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace seqent {

std::vector<std::pair<int, int>> LatticeSpec::bonds() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < n_sites; ++i) out.emplace_back(i, i + 1);
  if (kind == LatticeKind::chain_periodic && n_sites >= 2) out.emplace_back(n_sites - 1, 0);
  return out;
}

void LatticeSpec::validate() const {
  if (n_sites < 2) throw ValidationError("lattice needs N >= 2");
}

void CouplingParams::validate() const {
  if (!std::isfinite(J) || !std::isfinite(lambda) || !std::isfinite(B_z) || !std::isfinite(V0))
    throw ValidationError("coupling parameters must be finite");
  if (J <= 0.0) throw ValidationError("J must be positive (ferromagnetic exchange)");
  if (lambda <= 0.0) throw ValidationError("lambda must be positive");
  if (B_z < 0.0) throw ValidationError("B_z must be non-negative");
}

namespace {

void check_lattice(const LatticeSpec& lattice, int n_sites) {
  lattice.validate();
  if (lattice.n_sites != n_sites)
    throw ValidationError("lattice has N=" + std::to_string(lattice.n_sites) + " but basis has N=" +
                          std::to_string(n_sites));
}

void check_neutron(int neutron) {
  if (neutron != 1 && neutron != 2) throw ValidationError("neutron index must be 1 or 2");
}

}  // namespace

HamiltonianMatrix build_H0(const SectorBasis& basis, const LatticeSpec& lattice, const CouplingParams& p) {
  check_lattice(lattice, basis.n_sites());
  p.validate();
  const int n = basis.n_sites();
  const SiteMask sample_bits = (SiteMask{1} << n) - 1;
  const auto bonds = lattice.bonds();

  HamiltonianMatrix h{basis.tag(), CMatrix::Zero(basis.size(), basis.size())};
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const SiteMask mask = basis.config(col).mask();
    double diag = p.B_z * (n - 2 * std::popcount(mask & sample_bits));
    for (auto [i, j] : bonds) {
      const bool bi = (mask >> i) & 1U;
      const bool bj = (mask >> j) & 1U;
      diag += -p.J * (bi == bj ? 1.0 : -1.0);
      if (bi != bj) {
        // sx sx + sy sy = 2 (s+ s- + s- s+) swaps antiparallel neighbours.
        const Eigen::Index row = basis.index_of(mask ^ ((SiteMask{1} << i) | (SiteMask{1} << j)));
        h.entries(row, col) += -p.J * 2.0;
      }
    }
    h.entries(col, col) += diag;
  }
  return h;
}

HamiltonianMatrix build_H0(const CollectiveBasis& basis, const LatticeSpec& lattice, const CouplingParams& p) {
  check_lattice(lattice, basis.n_sites());
  if (lattice.kind != LatticeKind::chain_periodic)
    throw ValidationError("collective engine requires a periodic chain");
  p.validate();
  const int n = basis.n_sites();
  const double exchange = -p.J * static_cast<double>(lattice.bonds().size());

  HamiltonianMatrix h{basis.tag(), CMatrix::Zero(basis.size(), basis.size())};
  for (Eigen::Index i = 0; i < basis.size(); ++i)
    h.entries(i, i) = exchange + p.B_z * (n - 2 * basis.state(i).magnons);
  return h;
}

HamiltonianMatrix build_Hint(const SectorBasis& basis, int neutron, const CouplingParams& p) {
  check_neutron(neutron);
  p.validate();
  const int n = basis.n_sites();
  const int site = basis.neutron_site(neutron);
  const SiteMask sample_bits = (SiteMask{1} << n) - 1;

  HamiltonianMatrix h{basis.tag(), CMatrix::Zero(basis.size(), basis.size())};
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const SiteMask mask = basis.config(col).mask();
    const bool bn = (mask >> site) & 1U;
    const double sz_n = bn ? -1.0 : 1.0;
    h.entries(col, col) += p.V0 + p.lambda * sz_n * (n - 2 * std::popcount(mask & sample_bits));
    for (int i = 0; i < n; ++i) {
      if (((mask >> i) & 1U) == bn) continue;
      const Eigen::Index row = basis.index_of(mask ^ ((SiteMask{1} << i) | (SiteMask{1} << site)));
      h.entries(row, col) += 2.0 * p.lambda;
    }
  }
  return h;
}

HamiltonianMatrix build_Hint(const CollectiveBasis& basis, int neutron, const CouplingParams& p) {
  check_neutron(neutron);
  p.validate();
  const int n = basis.n_sites();

  HamiltonianMatrix h{basis.tag(), CMatrix::Zero(basis.size(), basis.size())};
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const CollectiveState s = basis.state(col);
    const int bn = neutron == 1 ? s.neutron1 : s.neutron2;
    h.entries(col, col) += p.V0 + p.lambda * (bn ? -1.0 : 1.0) * (n - 2 * s.magnons);
    // s-_neutron S+ : a sample flip moves onto an up neutron, |m> -> sqrt(m (N-m+1)) |m-1>.
    if (bn == 0 && s.magnons >= 1) {
      CollectiveState t = s;
      (neutron == 1 ? t.neutron1 : t.neutron2) = 1;
      t.magnons -= 1;
      const Eigen::Index row = basis.index_of(t);
      const double amp = 2.0 * p.lambda * std::sqrt(static_cast<double>(s.magnons) * (n - s.magnons + 1));
      h.entries(row, col) += amp;
      h.entries(col, row) += amp;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

Eigen::Matrix2cd DipoleAverageReport::averaged_pauli(int component) const {
  if (component < 0 || component > 2) throw ValidationError("Pauli component must be 0, 1 or 2");
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  return mean_map(component, 0) * sx + mean_map(component, 1) * sy + mean_map(component, 2) * sz;
}

DipoleAverageReport dipole_average_check(std::size_t samples, std::uint64_t seed) {
  if (samples < 10000) throw ValidationError("dipole_average_check needs at least 1e4 samples");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d sum_sq = Eigen::Matrix3d::Zero();
  for (std::size_t k = 0; k < samples; ++k) {
    Eigen::Vector3d q(gauss(rng), gauss(rng), gauss(rng));
    const double len = q.norm();
    if (len == 0.0) {
      --k;
      continue;
    }
    q /= len;
    const Eigen::Matrix3d m = Eigen::Matrix3d::Identity() - q * q.transpose();
    sum += m;
    sum_sq += m.cwiseProduct(m);
  }

  const double ns = static_cast<double>(samples);
  DipoleAverageReport r;
  r.samples = samples;
  r.seed = seed;
  r.mean_map = sum / ns;
  const Eigen::Matrix3d var = (sum_sq / ns - r.mean_map.cwiseProduct(r.mean_map)).cwiseMax(0.0) * (ns / (ns - 1.0));
  r.std_error = (var / ns).cwiseSqrt();
  r.c = r.mean_map.trace() / 3.0;
  r.c_std_error = std::sqrt(r.std_error.diagonal().squaredNorm()) / 3.0;
  for (int a = 0; a < 3; ++a) {
    r.max_diag_deviation = std::max(r.max_diag_deviation, std::abs(r.mean_map(a, a) - r.c));
    for (int b = 0; b < 3; ++b)
      if (a != b) r.max_offdiag_residual = std::max(r.max_offdiag_residual, std::abs(r.mean_map(a, b)));
  }
  return r;
}

}  // namespace seqent
