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

#ifndef MARKET_EQ_PARTITION_OPT_HPP_
#define MARKET_EQ_PARTITION_OPT_HPP_

#include <map>
#include <optional>
#include <vector>

#include "market_eq/game.hpp"

namespace market_eq {

struct Guards {
  double dp_states = 1e8;           // W^k for the weight-profile table
  double enumeration = 1e7;         // distinct partitions modulo types
  int config_lp_workers = 16;
  int max_cut_workers = 24;
  int brute_force_workers = 14;

  static Guards unlimited();
};

struct WeightProfile {
  std::vector<int> totals;  // per firm, firm order
  Rational welfare;
};

struct WeightedOptimum {
  Partition partition;
  WeightProfile profile;
};

// Final weight profiles reachable with every worker employed, each with the
// lexicographically smallest assignment realizing it.
std::map<std::vector<int>, std::vector<int>> reachable_weight_profiles(
    const CompetitionGame& game, const Guards& guards = {});

// Lexicographically smallest welfare-maximizing assignment.
WeightedOptimum optimal_partition_weighted(const CompetitionGame& game, const Guards& guards = {});

// Almost-balanced partition (part totals within 1), if one exists.
std::optional<Partition> almost_balanced_partition(const CompetitionGame& game,
                                                   const Guards& guards = {});

// All welfare maximizers modulo permutations of same-type workers and
// relabelings of identical firms. Each representative is the smallest
// assignment in its class; the list is sorted.
std::vector<Partition> enumerate_optimal_partitions(const CompetitionGame& game,
                                                    const Guards& guards = {});

// Canonical welfare maximizer, via the weighted table when possible.
Partition optimal_partition(const CompetitionGame& game, const Guards& guards = {});
Rational optimal_welfare(const CompetitionGame& game, const Guards& guards = {});

// Oracle: maximum over all k^n assignments.
Rational brute_force_welfare(const CompetitionGame& game, const Guards& guards = {});

Rational cut_weight(const SynergyMatrix& m, const Partition& partition);

// Maximum cut with worker 0 always at firm 1; ties go to the smallest
// assignment.
Partition max_cut_two_firm(const SynergyMatrix& m, const Guards& guards = {});

struct GapReport {
  Rational integral;
  Rational fractional;
  Rational ratio;
};

GapReport configuration_lp(const CompetitionGame& game, const Guards& guards = {});

}  // namespace market_eq

#endif  // MARKET_EQ_PARTITION_OPT_HPP_
