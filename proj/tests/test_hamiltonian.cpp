#include <doctest.h>

#include "seqent/hamiltonian.hpp"
#include "support.hpp"

using namespace seqent;

namespace {

// Sector-basis restriction of a full-space operator.
CMatrix restrict(const testsupport::Mat& full, const SectorBasis& b) {
  CMatrix out(b.size(), b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j)
      out(i, j) = full(static_cast<Eigen::Index>(b.config(i).mask()), static_cast<Eigen::Index>(b.config(j).mask()));
  return out;
}

// Collective states with at most k_max flips in total.
std::vector<Eigen::Index> within_budget(const CollectiveBasis& cb, int k_max) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < cb.size(); ++i) {
    const auto& s = cb.state(i);
    if (s.neutron1 + s.neutron2 + s.magnons <= k_max) out.push_back(i);
  }
  return out;
}

// Columns are the sector images of the selected collective basis vectors.
CMatrix embedding(const CollectiveBasis& cb, const SectorBasis& sb, const std::vector<Eigen::Index>& keep) {
  CMatrix e(sb.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    StateVector v{cb.tag(), CVector::Zero(cb.size())};
    v.amplitudes[keep[k]] = 1.0;
    e.col(static_cast<Eigen::Index>(k)) = embed_collective_in_sector(v, cb, sb).amplitudes;
  }
  return e;
}

CMatrix sub(const CMatrix& m, const std::vector<Eigen::Index>& keep) {
  CMatrix out(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = m(keep[i], keep[j]);
  return out;
}

}  // namespace

TEST_CASE("sector Hamiltonians match the dense Kronecker-product reference") {
  testsupport::Gen g(3);
  for (int trial = 0; trial < 12; ++trial) {
    const int N = g.integer(2, 5);
    const bool periodic = trial % 3 != 0;
    CouplingParams p{g.uniform(0.05, 1.5), g.uniform(0.2, 2.0), g.uniform(0.0, 5.0), g.uniform(-1.0, 1.0)};
    LatticeSpec lat{periodic ? LatticeKind::chain_periodic : LatticeKind::chain_open, N};
    testsupport::FullModel m{N, p.J, p.lambda, p.B_z, p.V0, periodic};
    for (int k = 1; k <= 2; ++k) {
      SectorBasis b(N, k);
      CHECK((build_H0(b, lat, p).entries - restrict(m.H0(), b)).norm() < 1e-12);
      CHECK((build_Hint(b, 1, p).entries - restrict(m.Hint(1), b)).norm() < 1e-12);
      CHECK((build_Hint(b, 2, p).entries - restrict(m.Hint(2), b)).norm() < 1e-12);
    }
  }
}

TEST_CASE("Hamiltonians are Hermitian and conserve the flip number") {
  SectorBasis b(6, 2);
  CouplingParams p{0.3, 1.1, 2.0, 0.4};
  LatticeSpec lat{LatticeKind::chain_periodic, 6};
  for (const auto& h : {build_H0(b, lat, p), build_Hint(b, 1, p), build_Hint(b, 2, p)}) {
    CHECK(hermiticity_defect(h.entries) < 1e-14);
    for (Eigen::Index i = 0; i < b.size(); ++i)
      for (Eigen::Index j = 0; j < b.size(); ++j)
        if (b.config(i).flip_count() != b.config(j).flip_count()) CHECK(h.entries(i, j) == Complex(0.0));
  }
}

TEST_CASE("scattering matrix elements for the one-magnon state") {
  const int N = 5;
  CouplingParams p{0.25, 0.7, 0.0, 0.3};
  CollectiveBasis cb(N, 1);
  const auto h = build_Hint(cb, 1, p).entries;
  const auto w = cb.index_of({0, 0, 1});
  const auto flip = cb.index_of({1, 0, 0});
  CHECK(std::abs(h(flip, w) - 2.0 * p.lambda * std::sqrt(double(N))) < 1e-14);
  CHECK(std::abs(h(cb.index_of({0, 0, 0}), cb.index_of({0, 0, 0})) - (p.V0 + p.lambda * N)) < 1e-14);
}

TEST_CASE("collective Hamiltonians are the sector ones projected on Dicke states") {
  for (int N : {2, 3, 4, 7}) {
    for (int m = 1; m <= 2; ++m) {
      CouplingParams p{0.4, 0.9, 1.7, -0.2};
      LatticeSpec lat{LatticeKind::chain_periodic, N};
      CollectiveBasis cb(N, m);
      SectorBasis sb(N, 2);
      const auto keep = within_budget(cb, 2);
      const CMatrix e = embedding(cb, sb, keep);
      CHECK((e.adjoint() * build_H0(sb, lat, p).entries * e - sub(build_H0(cb, lat, p).entries, keep)).norm() < 1e-12);
      for (int n : {1, 2}) {
        const CMatrix hs = build_Hint(sb, n, p).entries;
        CHECK((e.adjoint() * hs * e - sub(build_Hint(cb, n, p).entries, keep)).norm() < 1e-12);
        // The Dicke subspace is invariant, so nothing leaks out of it.
        if (m == 2) CHECK(((CMatrix::Identity(sb.size(), sb.size()) - e * e.adjoint()) * hs * e).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("collective H0 is diagonal and requires a periodic chain") {
  CollectiveBasis cb(5, 2);
  CouplingParams p{0.25, 1.0, 3.0, 0.0};
  const auto h = build_H0(cb, {LatticeKind::chain_periodic, 5}, p).entries;
  CHECK((h - CMatrix(h.diagonal().asDiagonal())).norm() == 0.0);
  CHECK_THROWS_AS(build_H0(cb, {LatticeKind::chain_open, 5}, p), ValidationError);
}

TEST_CASE("H0 and the scattering term do not commute") {
  SectorBasis b(4, 1);
  CouplingParams p{0.25, 1.0, 3.0, 0.0};
  const auto h0 = build_H0(b, {LatticeKind::chain_periodic, 4}, p).entries;
  const auto h1 = build_Hint(b, 1, p).entries;
  CHECK((h0 * h1 - h1 * h0).norm() > 1e-3);
}

TEST_CASE("uniform one-magnon state is an H0 eigenstate on the ring") {
  for (int N : {3, 4, 8}) {
    SectorBasis b(N, 1);
    CouplingParams p{0.6, 1.0, 1.3, 0.0};
    const auto h0 = build_H0(b, {LatticeKind::chain_periodic, N}, p).entries;
    CVector w = CVector::Zero(b.size());
    for (int j = 0; j < N; ++j) w[b.index_of(SiteMask{1} << j)] = 1.0 / std::sqrt(double(N));
    const CVector hw = h0 * w;
    const Complex e = w.dot(hw);
    CHECK((hw - e * w).norm() < 1e-12);
    CHECK(std::abs(e.real() - (-p.J * N + p.B_z * (N - 2))) < 1e-12);
  }
}

TEST_CASE("parameter and lattice validation") {
  CHECK_THROWS_AS((CouplingParams{0.0, 1.0, 0.0, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS((CouplingParams{0.25, -1.0, 0.0, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS((CouplingParams{0.25, 1.0, -0.1, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS((CouplingParams{0.25, 1.0, NAN, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS((LatticeSpec{LatticeKind::chain_open, 1}.validate()), ValidationError);
  SectorBasis b(4, 1);
  CHECK_THROWS_AS(build_H0(b, {LatticeKind::chain_periodic, 5}, CouplingParams{}), ValidationError);
  CHECK_THROWS_AS(build_Hint(b, 3, CouplingParams{}), ValidationError);
  CHECK(LatticeSpec{LatticeKind::chain_open, 5}.bonds().size() == 4);
  CHECK(LatticeSpec{LatticeKind::chain_periodic, 5}.bonds().size() == 5);
}

TEST_CASE("spherical dipole average is (2/3) times the identity") {
  const auto r = dipole_average_check(100000, 17);
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(r.mean_map(a, a) - 2.0 / 3.0) < 4.0 * r.std_error(a, a));
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(std::abs(r.mean_map(a, b)) < 4.0 * r.std_error(a, b));
  }
  CHECK(std::abs(r.c - 2.0 / 3.0) < 1e-12);  // trace of I - QQ^T is 2 for every unit Q
  const Eigen::Vector3d s(0.3, -1.2, 0.5);
  CHECK((r.apply(s) - 2.0 / 3.0 * s).norm() < 0.02);
  CHECK((r.averaged_pauli(2) - 2.0 / 3.0 * Eigen::Matrix2cd(Eigen::Vector2cd(1.0, -1.0).asDiagonal())).norm() < 0.02);
  CHECK_THROWS_AS(dipole_average_check(10, 1), ValidationError);
}

TEST_CASE("dipole average is reproducible for a seed") {
  const auto a = dipole_average_check(10000, 99);
  const auto b = dipole_average_check(10000, 99);
  CHECK(a.mean_map == b.mean_map);
}
