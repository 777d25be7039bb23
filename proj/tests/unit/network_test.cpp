// Copyright 2026 The market_eq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "market_eq/io.hpp"
#include "market_eq/network.hpp"
#include "test_support.hpp"

namespace market_eq {
namespace {

InfluenceNetwork random_network(int workers, int others, int edges, std::mt19937_64& rng,
                                bool probabilistic = true, bool into_workers = true) {
  const int nodes = workers + others;
  std::vector<int> w;
  for (int j = 0; j < workers; ++j) w.push_back(j);
  std::vector<Edge> e;
  for (int i = 0; i < edges; ++i) {
    const int from = static_cast<int>(rng() % nodes);
    int to = static_cast<int>(rng() % nodes);
    if (to == from) to = (to + 1) % nodes;
    if (!into_workers && to < workers) to = workers + static_cast<int>(rng() % others);
    const Rational p = probabilistic ? ratio(1 + static_cast<long>(rng() % 4), 4) : Rational(1);
    e.push_back({from, to, p});
  }
  return InfluenceNetwork(nodes, w, e);
}

InfluenceNetwork fixture_network() {
  return network_from_json(read_json_file(testing::fixture_path("two_sparse_network.json")));
}

TEST(InfluenceTest, DeterministicReachability) {
  const auto net = fixture_network();
  EXPECT_EQ(influence_exact(net, make_set({0})), 4);
  EXPECT_EQ(influence_exact(net, make_set({2})), 5);
  EXPECT_EQ(influence_exact(net, make_set({0, 1, 2})), 8);
  EXPECT_EQ(sparsity(net), 2);
}

TEST(InfluenceTest, ExactMatchesPercolationOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto net = random_network(3, 4, 6 + static_cast<int>(rng() % 6), rng);
    for (WorkerSet s = 0; s < 8; ++s) {
      ASSERT_EQ(influence_exact(net, s), testing::oracle_influence(net, s)) << "trial " << trial;
    }
  }
}

TEST(InfluenceTest, GuardCountsOnlyProbabilisticEdges) {
  std::vector<Edge> edges;
  for (int i = 0; i < 30; ++i) edges.push_back({0, 1 + i, Rational(1)});
  edges.push_back({1, 31, Rational(1, 2)});
  const InfluenceNetwork net(32, {0}, edges);
  EXPECT_EQ(influence_exact(net, 1), Rational(61, 2));
  std::vector<Edge> many;
  for (int i = 0; i < 30; ++i) many.push_back({0, 1 + i, Rational(1, 2)});
  EXPECT_THROW(influence_exact(InfluenceNetwork(31, {0}, many), 1), GuardError);
}

TEST(InfluenceTest, MonteCarloIsThreadIndependentAndUnbiased) {
  std::mt19937_64 rng(23);
  const auto net = random_network(2, 5, 9, rng);
  const auto one = influence_monte_carlo(net, 1, 20000, 99, 1);
  const auto four = influence_monte_carlo(net, 1, 20000, 99, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.standard_error, four.standard_error);
  const double exact = influence_exact(net, 1).get_d();
  EXPECT_LE(std::abs(one.estimate - exact), 4 * one.standard_error + 1e-12);
}

TEST(ConversionTest, TwoSparseNetworkToMatrix) {
  const auto m = network_to_synergy(fixture_network());
  const SynergyMatrix expected(3, {1, 2, 1, 2, 0, 2, 1, 2, 2});
  EXPECT_EQ(m, expected);
}

TEST(ConversionTest, RejectsThreeSparse) {
  const auto f = build_ds_fixtures();
  EXPECT_EQ(sparsity(f.combined), 3);
  EXPECT_THROW(network_to_synergy(f.combined), PreconditionError);
}

TEST(ConversionTest, RoundTripPreservesMatrixAndValues) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto m = testing::random_synergy(n, 3, rng);
    const auto net = synergy_to_network(m);
    EXPECT_LE(sparsity(net), 2);
    EXPECT_EQ(network_to_synergy(net), m);
    for (WorkerSet s = 0; s < (WorkerSet{1} << n); ++s) {
      ASSERT_EQ(influence_exact(net, s), synergy_value(m, s));
    }
  }
}

TEST(ConversionTest, DiagonalMatrixGivesStarForest) {
  const SynergyMatrix m(3, {2, 0, 0, 0, 3, 0, 0, 0, 1});
  const auto net = synergy_to_network(m);
  EXPECT_EQ(sparsity(net), 1);
  EXPECT_EQ(net.node_count(), 3 + 6);
}

TEST(MoebiusTest, CapacityTableIsNotRepresentable) {
  const auto t = moebius_decomposition({0, 3, 3, 6, 3, 6, 6, 8}, 3);
  EXPECT_FALSE(t.representable);
  EXPECT_EQ(t.coefficients[make_set({0})], 2);
  EXPECT_EQ(t.coefficients[make_set({0, 1})], 1);
  EXPECT_EQ(t.coefficients[make_set({1, 2})], 1);
  EXPECT_EQ(t.coefficients[make_set({0, 1, 2})], -1);
  ASSERT_TRUE(t.witness.has_value());
  EXPECT_EQ(*t.witness, make_set({0, 1, 2}));
}

// Excluding seeds from the count breaks coverage once a worker can activate
// another worker, so edges here never enter worker nodes.
TEST(MoebiusTest, NetworkValuesDecomposeNonNegatively) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = random_network(3, 5, 8, rng, true, false);
    const auto v = Valuation::influence(std::make_shared<const InfluenceNetwork>(net));
    const auto table = tabulate(v, {1, 1, 1});
    const auto dec = moebius_decomposition(table, 3);
    EXPECT_TRUE(dec.representable);
    for (WorkerSet s = 0; s < 8; ++s) EXPECT_EQ(moebius_reconstruct(dec, s), table[s]);
  }
}

TEST(MoebiusTest, WorkerChainsCanGoNegative) {
  // 0 -> 1 -> node 2: v({0}) = 2, v({1}) = 1, v({0,1}) = 1.
  const InfluenceNetwork net(3, {0, 1}, {{0, 1, 1}, {1, 2, 1}});
  const auto dec = moebius_decomposition(tabulate(Valuation::influence(std::make_shared<const InfluenceNetwork>(net)), {1, 1}), 2);
  EXPECT_FALSE(dec.representable);
  EXPECT_EQ(dec.coefficients[2], -1);
  EXPECT_EQ(dec.coefficients[3], 2);
}

TEST(SymmetrizeTest, MatchesCombinedNetworkAndStaysSubmodular) {
  const auto f = build_ds_fixtures();
  const CompetitionGame pair({1, 1, 1, 1}, {f.v1, f.v2});
  const auto sym = symmetrize(pair, f.z_prime);
  ASSERT_EQ(sym.n(), 6);
  EXPECT_TRUE(sym.is_symmetric());
  EXPECT_TRUE(is_submodular(sym.valuation(1), sym.weights()));
  for (WorkerSet s = 0; s < 64; ++s) {
    ASSERT_EQ(sym.value(1, s), influence_exact(f.combined, s)) << s;
  }
  for (WorkerSet s = 0; s < 16; ++s) {
    EXPECT_EQ(influence_exact(f.h1, s), f.v1.value(s, {1, 1, 1, 1}));
    EXPECT_EQ(influence_exact(f.h2, s), f.v2.value(s, {1, 1, 1, 1}));
  }
}

TEST(SymmetrizeTest, RequiresLargeEnoughOffset) {
  const auto f = build_ds_fixtures();
  const CompetitionGame pair({1, 1, 1, 1}, {f.v1, f.v2});
  EXPECT_THROW(symmetrize(pair, 4), PreconditionError);
}

}  // namespace
}  // namespace market_eq
