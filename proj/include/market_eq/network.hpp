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

#ifndef MARKET_EQ_NETWORK_HPP_
#define MARKET_EQ_NETWORK_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "market_eq/game.hpp"
#include "market_eq/network_types.hpp"

namespace market_eq {

inline constexpr int kMaxProbabilisticEdges = 25;
inline constexpr int kMaxMoebiusWorkers = 12;

// Expected number of activated nodes outside the seed set. The seed set is
// a set of worker indices (positions in network.workers()).
Rational influence_exact(const InfluenceNetwork& network, WorkerSet seeds,
                         int max_probabilistic_edges = kMaxProbabilisticEdges);

struct MonteCarloEstimate {
  Rational mean;  // exact sample mean
  double estimate = 0.0;
  double standard_error = 0.0;
  std::int64_t samples = 0;
};

// Deterministic for fixed (seed, samples) regardless of thread count.
MonteCarloEstimate influence_monte_carlo(const InfluenceNetwork& network, WorkerSet seeds,
                                         std::int64_t samples, std::uint64_t seed,
                                         int threads = 1);

// Largest number of workers with a path to a single node. A worker is not
// counted as reaching itself.
int sparsity(const InfluenceNetwork& network);

// Exact for 2-sparse networks in which no worker reaches another worker.
SynergyMatrix network_to_synergy(const InfluenceNetwork& network);

// Deterministic 2-sparse network with one node per unit of each entry.
// Workers are nodes 0..n-1.
InfluenceNetwork synergy_to_network(const SynergyMatrix& matrix);

// Values of an arbitrary valuation on all 2^n subsets.
std::vector<Rational> tabulate(const Valuation& v, const std::vector<int>& weights);

struct MoebiusTable {
  int n = 0;
  std::vector<Rational> coefficients;  // f(T) by bitmask; f(empty) = 0
  bool representable = false;          // all coefficients non-negative
  std::optional<WorkerSet> witness;    // smallest set with f(T) < 0
};

// Solves sum_{T meets S} f(T) = v(S) for every S.
MoebiusTable moebius_decomposition(const std::vector<Rational>& table, int n);
Rational moebius_reconstruct(const MoebiusTable& table, WorkerSet s);

// Two-firm submodular game on N into a symmetric game on N plus two extra
// workers (indices n and n+1).
CompetitionGame symmetrize(const CompetitionGame& game, const Rational& z_prime);

struct DsFixtures {
  Valuation v1;
  Valuation v2;
  InfluenceNetwork h1;
  InfluenceNetwork h2;
  InfluenceNetwork combined;  // workers 1..4, x, y
  Rational z_prime;
};

// The four-item two-bidder submodular example without Walrasian prices,
// with network realizations of both bidders and of the symmetric version.
DsFixtures build_ds_fixtures();

}  // namespace market_eq

#endif  // MARKET_EQ_NETWORK_HPP_
