#include <doctest.h>

#include <set>

#include "seqent/basis.hpp"
#include "support.hpp"

using namespace seqent;

TEST_CASE("sector dimension is a sum of binomials") {
  CHECK(SectorBasis(4, 1).size() == 7);
  CHECK(SectorBasis(4, 2).size() == 1 + 6 + 15);
  CHECK(SectorBasis(2, 2).size() == 1 + 4 + 6);
  for (int n = 2; n <= 12; ++n)
    for (int k = 1; k <= 2; ++k) {
      std::size_t expect = 0;
      for (int j = 0; j <= k; ++j) expect += static_cast<std::size_t>(binomial(n + 2, j));
      CHECK(SectorBasis(n, k).size() == static_cast<Eigen::Index>(expect));
      CHECK(SectorBasis::expected_dimension(n, k) == expect);
    }
}

TEST_CASE("sector ordering: flip count, then lexicographic") {
  SectorBasis b(3, 2);
  CHECK(b.config(0).mask() == 0);
  CHECK(b.config(1).flipped_sites() == std::vector<int>{0});
  CHECK(b.config(5).flipped_sites() == std::vector<int>{4});
  CHECK(b.config(6).flipped_sites() == (std::vector<int>{0, 1}));
  CHECK(b.config(7).flipped_sites() == (std::vector<int>{0, 2}));
  CHECK(b.config(b.size() - 1).flipped_sites() == (std::vector<int>{3, 4}));
  for (Eigen::Index i = 1; i < b.size(); ++i)
    CHECK(b.config(i - 1).flip_count() <= b.config(i).flip_count());
}

TEST_CASE("index_of round-trips and rejects configurations outside the sector") {
  testsupport::Gen g(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(2, 20);
    const int k = g.integer(1, 2);
    SectorBasis b(n, k);
    std::set<SiteMask> seen;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      CHECK(b.index_of(b.config(i).mask()) == i);
      seen.insert(b.config(i).mask());
    }
    CHECK(seen.size() == static_cast<std::size_t>(b.size()));
    CHECK(b.index_of(0b111) == -1);
  }
}

TEST_CASE("neutron sites follow the sample") {
  SectorBasis b(5, 1);
  CHECK(b.neutron_site(1) == 5);
  CHECK(b.neutron_site(2) == 6);
}

TEST_CASE("spin configuration helpers") {
  auto c = SpinConfiguration::from_sites({4, 1});
  CHECK(c.mask() == 0b10010);
  CHECK(c.flip_count() == 2);
  CHECK(c.flipped(1));
  CHECK_FALSE(c.flipped(0));
  CHECK(c.flipped_sites() == (std::vector<int>{1, 4}));
}

TEST_CASE("invalid sector bases are rejected") {
  CHECK_THROWS_AS(SectorBasis(1, 1), ValidationError);
  CHECK_THROWS_AS(SectorBasis(4, 0), ValidationError);
  CHECK_THROWS_AS(SectorBasis(4, 3), ValidationError);
  CHECK_THROWS_AS(SectorBasis(63, 1), ValidationError);
}

TEST_CASE("collective basis ordering and validation") {
  CollectiveBasis b(6, 2);
  CHECK(b.size() == 12);
  CHECK(b.state(0) == CollectiveState{0, 0, 0});
  CHECK(b.state(1) == CollectiveState{0, 0, 1});
  CHECK(b.state(3) == CollectiveState{1, 0, 0});
  CHECK(b.state(6) == CollectiveState{0, 1, 0});
  for (Eigen::Index i = 0; i < b.size(); ++i) CHECK(b.index_of(b.state(i)) == i);
  CHECK(CollectiveBasis(2, 2).size() == 12);
  CHECK_THROWS_AS(CollectiveBasis(1, 1), ValidationError);
  CHECK_THROWS_AS(CollectiveBasis(4, 3), ValidationError);
  CHECK_THROWS_AS(CollectiveBasis(4, -1), ValidationError);
}

TEST_CASE("embedding collective states into the sector basis is an isometry") {
  testsupport::Gen g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(2, 9);
    const int m = std::min(2, g.integer(1, 2));
    CollectiveBasis cb(n, m);
    SectorBasis sb(n, 2);
    StateVector u{cb.tag(), CVector(cb.size())}, v{cb.tag(), CVector(cb.size())};
    // Only states within the sector's flip budget embed.
    for (Eigen::Index i = 0; i < cb.size(); ++i) {
      const auto& s = cb.state(i);
      const bool fits = s.neutron1 + s.neutron2 + s.magnons <= 2;
      u.amplitudes[i] = fits ? Complex(g.normal(), g.normal()) : Complex(0.0);
      v.amplitudes[i] = fits ? Complex(g.normal(), g.normal()) : Complex(0.0);
    }
    const auto eu = embed_collective_in_sector(u, cb, sb);
    const auto ev = embed_collective_in_sector(v, cb, sb);
    CHECK(std::abs(eu.amplitudes.dot(ev.amplitudes) - u.amplitudes.dot(v.amplitudes)) < 1e-12);
  }
}

TEST_CASE("embedding a one-magnon Dicke state spreads 1/sqrt(N) over the sample") {
  CollectiveBasis cb(4, 1);
  SectorBasis sb(4, 1);
  StateVector v{cb.tag(), CVector::Zero(cb.size())};
  v.amplitudes[cb.index_of({0, 0, 1})] = 1.0;
  const auto e = embed_collective_in_sector(v, cb, sb);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(e.amplitudes[sb.index_of(SiteMask{1} << j)] - 0.5) < 1e-15);
}

TEST_CASE("embedding fails when the sector is too small") {
  CollectiveBasis cb(4, 2);
  SectorBasis sb(4, 1);
  StateVector v{cb.tag(), CVector::Zero(cb.size())};
  v.amplitudes[cb.index_of({0, 0, 2})] = 1.0;
  CHECK_THROWS_AS(embed_collective_in_sector(v, cb, sb), ValidationError);
}

TEST_CASE("binomial") {
  CHECK(binomial(6, 2) == 15.0);
  CHECK(binomial(10, 0) == 1.0);
  CHECK(binomial(3, 4) == 0.0);
}
