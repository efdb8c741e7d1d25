#include "seqent/basis.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace seqent {

std::string to_string(const BasisTag& tag) {
  std::ostringstream os;
  os << (tag.kind == BasisKind::sector ? "sector" : "collective") << "(N=" << tag.n_sites
     << (tag.kind == BasisKind::sector ? ",k_max=" : ",m_max=") << tag.max_excitations << ")";
  return os.str();
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

SpinConfiguration SpinConfiguration::from_sites(const std::vector<int>& sites) {
  SiteMask mask = 0;
  for (int s : sites) {
    if (s < 0 || s >= 64) throw ValidationError("site index out of range: " + std::to_string(s));
    mask |= SiteMask{1} << s;
  }
  return SpinConfiguration(mask);
}

int SpinConfiguration::flip_count() const { return std::popcount(mask_); }

std::vector<int> SpinConfiguration::flipped_sites() const {
  std::vector<int> sites;
  for (SiteMask m = mask_; m != 0; m &= m - 1) sites.push_back(std::countr_zero(m));
  return sites;
}

// ---------------------------------------------------------------------------

SectorBasis::SectorBasis(int n_sites, int k_max) : n_sites_(n_sites), k_max_(k_max) {
  if (n_sites < 2) throw ValidationError("sector basis needs N >= 2");
  if (n_sites + 2 > 64) throw ValidationError("sector basis limited to N <= 62");
  if (k_max < 1 || k_max > kMaxFlips)
    throw ValidationError("k_max must be 1 or 2 (the protocol never holds more than two flips)");

  const int total = n_sites + 2;
  configs_.emplace_back(0);
  for (int i = 0; i < total; ++i) configs_.emplace_back(SiteMask{1} << i);
  if (k_max == 2) {
    for (int i = 0; i < total; ++i)
      for (int j = i + 1; j < total; ++j) configs_.emplace_back((SiteMask{1} << i) | (SiteMask{1} << j));
  }
  index_.reserve(configs_.size());
  for (std::size_t i = 0; i < configs_.size(); ++i)
    index_.emplace(configs_[i].mask(), static_cast<Eigen::Index>(i));
}

Eigen::Index SectorBasis::index_of(SiteMask mask) const {
  auto it = index_.find(mask);
  return it == index_.end() ? -1 : it->second;
}

std::size_t SectorBasis::expected_dimension(int n_sites, int k_max) {
  double d = 0.0;
  for (int j = 0; j <= k_max; ++j) d += binomial(n_sites + 2, j);
  return static_cast<std::size_t>(d);
}

// ---------------------------------------------------------------------------

CollectiveBasis::CollectiveBasis(int n_sites, int m_max) : n_sites_(n_sites), m_max_(m_max) {
  if (n_sites < 2) throw ValidationError("collective basis needs N >= 2");
  if (m_max < 0 || m_max > 2) throw ValidationError("m_max must be 0, 1 or 2");
  if (m_max > n_sites) throw ValidationError("m_max cannot exceed N");
  for (int n2 = 0; n2 <= 1; ++n2)
    for (int n1 = 0; n1 <= 1; ++n1)
      for (int m = 0; m <= m_max; ++m) states_.push_back({n1, n2, m});
}

Eigen::Index CollectiveBasis::index_of(const CollectiveState& s) const {
  if (s.magnons < 0 || s.magnons > m_max_ || (s.neutron1 & ~1) || (s.neutron2 & ~1)) return -1;
  return (s.neutron2 * 2 + s.neutron1) * (m_max_ + 1) + s.magnons;
}

// ---------------------------------------------------------------------------

namespace {

// Visits every sample mask with exactly m flips among the first n sites.
template <typename F>
void for_each_sample_mask(int n, int m, F&& visit) {
  if (m == 0) {
    visit(SiteMask{0});
  } else if (m == 1) {
    for (int i = 0; i < n; ++i) visit(SiteMask{1} << i);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) visit((SiteMask{1} << i) | (SiteMask{1} << j));
  }
}

}  // namespace

StateVector embed_collective_in_sector(const StateVector& v, const CollectiveBasis& cb,
                                       const SectorBasis& sb) {
  if (v.basis != cb.tag()) throw ValidationError("vector is not expressed in " + to_string(cb.tag()));
  if (cb.n_sites() != sb.n_sites()) throw ValidationError("collective and sector bases differ in N");
  if (v.amplitudes.size() != cb.size()) throw ValidationError("vector length does not match basis");

  const int n = sb.n_sites();
  StateVector out{sb.tag(), CVector::Zero(sb.size())};
  for (Eigen::Index i = 0; i < cb.size(); ++i) {
    const Complex amp = v.amplitudes[i];
    if (amp == Complex{}) continue;
    const auto& s = cb.state(i);
    if (s.neutron1 + s.neutron2 + s.magnons > sb.k_max())
      throw ValidationError("collective vector has weight outside the sector basis (raise k_max)");
    const SiteMask neutrons = (SiteMask(s.neutron1) << n) | (SiteMask(s.neutron2) << (n + 1));
    const double scale = 1.0 / std::sqrt(binomial(n, s.magnons));
    for_each_sample_mask(n, s.magnons, [&](SiteMask sample) {
      out.amplitudes[sb.index_of(sample | neutrons)] += amp * scale;
    });
  }
  return out;
}

}  // namespace seqent
