#include <random>

#include <gtest/gtest.h>

#include "netcpd/error.hpp"
#include "netcpd/network.hpp"
#include "oracles.hpp"

using namespace netcpd;

TEST(Dyads, UndirectedOrderIsUpperTriangleRowMajor) {
  const auto d = enumerate_dyads(3, false);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], (Dyad{0, 0, 1}));
  EXPECT_EQ(d[1], (Dyad{1, 0, 2}));
  EXPECT_EQ(d[2], (Dyad{2, 1, 2}));
}

TEST(Dyads, Counts) {
  EXPECT_EQ(enumerate_dyads(3, true).size(), 6u);
  EXPECT_EQ(dyad_count(50, true), 2450u);
  EXPECT_EQ(dyad_count(50, false), 1225u);
  EXPECT_THROW(enumerate_dyads(1, true), InputError);
}

TEST(Dyads, NoDiagonalAndOrdinalsSequential) {
  for (bool directed : {true, false}) {
    const auto d = enumerate_dyads(7, directed);
    EXPECT_EQ(d.size(), dyad_count(7, directed));
    for (std::size_t k = 0; k < d.size(); ++k) {
      EXPECT_EQ(d[k].ordinal, k);
      EXPECT_NE(d[k].i, d[k].j);
      if (!directed) EXPECT_LT(d[k].i, d[k].j);
    }
  }
}

TEST(Network, AdjacencyValidation) {
  EXPECT_THROW(Network::from_adjacency({{1, 0}, {0, 0}}, true), InputError);
  EXPECT_THROW(Network::from_adjacency({{0, 1}, {0, 0}}, false), InputError);
  EXPECT_THROW(Network::from_adjacency({{0, 2}, {0, 0}}, true), InputError);
  EXPECT_THROW(Network::from_adjacency({{0, 1}, {0}}, true), InputError);
  const Network y = Network::from_adjacency({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}, false);
  EXPECT_TRUE(y.has_edge(1, 0));
  EXPECT_EQ(y.edge_count(), 1u);
  EXPECT_EQ(y.to_adjacency(), (std::vector<std::vector<int>>{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}));
}

TEST(Network, UndirectedSetKeepsSymmetry) {
  Network y(4, false);
  y.set_edge(2, 1, true);
  EXPECT_TRUE(y.has_edge(1, 2));
  EXPECT_THROW(y.set_edge(1, 1, true), InputError);
  EXPECT_THROW(y.set_edge(0, 4, true), InputError);
}

TEST(Series, RejectsMismatchedSnapshots) {
  EXPECT_THROW(NetworkSeries({Network(3, true)}), InputError);
  EXPECT_THROW(NetworkSeries({Network(3, true), Network(4, true)}), InputError);
  EXPECT_THROW(NetworkSeries({Network(3, true), Network(3, false)}), InputError);
  EXPECT_THROW(NetworkSeries({Network(3, true), Network(3, true)},
                             NodalAttributes({"a", "b"})),
               InputError);
}

TEST(FormationDissolution, Examples) {
  const Network empty(3, false);
  Network complete(3, false);
  complete.set_edge(0, 1, true);
  complete.set_edge(0, 2, true);
  complete.set_edge(1, 2, true);
  EXPECT_EQ(derive_formation(empty, empty), empty);
  EXPECT_EQ(derive_formation(empty, complete), complete);
  EXPECT_EQ(derive_dissolution(complete, complete), complete);

  Network a(3, false);
  a.set_edge(0, 1, true);
  a.set_edge(0, 2, true);
  Network b(3, false);
  b.set_edge(0, 1, true);
  Network expect(3, false);
  expect.set_edge(0, 1, true);
  EXPECT_EQ(derive_dissolution(a, b), expect);
}

TEST(FormationDissolution, ElementwiseAgainstBruteForce) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Network p = oracle::random_network(6, true, 0.4, rng);
    const Network c = oracle::random_network(6, true, 0.4, rng);
    const Network f = derive_formation(p, c);
    const Network d = derive_dissolution(p, c);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        if (i == j) continue;
        EXPECT_EQ(f.has_edge(i, j), p.has_edge(i, j) || c.has_edge(i, j));
        EXPECT_EQ(d.has_edge(i, j), p.has_edge(i, j) && c.has_edge(i, j));
      }
  }
}

TEST(Reconstruct, EdgeCasesAndPreconditions) {
  std::mt19937_64 rng(5);
  const Network plus = oracle::random_network(5, true, 0.5, rng);
  EXPECT_EQ(reconstruct_current(Network(5, true), plus, Network(5, true)), plus);
  Network full(5, true);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) full.set_edge(i, j, true);
  const Network minus = oracle::random_network(5, true, 0.5, rng);
  EXPECT_EQ(reconstruct_current(full, full, minus), minus);
  EXPECT_THROW(reconstruct_current(full, minus, minus), InputError);
  EXPECT_THROW(reconstruct_current(Network(5, true), plus, full), InputError);
}

TEST(Reconstruct, RoundTripRandomPairs) {
  std::mt19937_64 rng(7);
  for (bool directed : {true, false}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Network p = oracle::random_network(8, directed, 0.3, rng);
      const Network c = oracle::random_network(8, directed, 0.3, rng);
      const Network f = derive_formation(p, c);
      const Network d = derive_dissolution(p, c);
      EXPECT_TRUE(f.contains(p));
      EXPECT_TRUE(p.contains(d));
      EXPECT_EQ(reconstruct_current(p, f, d), c);
    }
  }
}
