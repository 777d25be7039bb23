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

#ifndef MARKET_EQ_GAME_HPP_
#define MARKET_EQ_GAME_HPP_

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "market_eq/network_types.hpp"
#include "market_eq/rational.hpp"

namespace market_eq {

// Bit j set iff worker j is in the set.
using WorkerSet = std::uint64_t;

inline int set_size(WorkerSet s) { return std::popcount(s); }
inline bool contains(WorkerSet s, int j) { return (s >> j) & 1u; }
inline WorkerSet full_set(int n) { return n >= 64 ? ~WorkerSet{0} : (WorkerSet{1} << n) - 1; }
std::vector<int> members(WorkerSet s);
WorkerSet make_set(const std::vector<int>& workers);

inline constexpr int kMaxExplicitWorkers = 20;

enum class InfluenceMode { kExact, kMonteCarlo };

class Valuation {
 public:
  enum class Kind { kWeighted, kExplicit, kSynergy, kInfluence };

  // values[t] is the value of total weight t. values[0] must be 0.
  static Valuation weighted(std::vector<Rational> values);
  // table[S] for every S over n workers, indexed by bitmask.
  static Valuation explicit_table(int n, std::vector<Rational> table);
  static Valuation synergy(std::shared_ptr<const SynergyMatrix> matrix);
  static Valuation influence(std::shared_ptr<const InfluenceNetwork> network,
                             InfluenceMode mode = InfluenceMode::kExact);

  Kind kind() const { return kind_; }
  const std::vector<Rational>& weighted_values() const;
  const std::vector<Rational>& table() const;
  const SynergyMatrix& matrix() const;
  const InfluenceNetwork& network() const;
  InfluenceMode mode() const { return mode_; }
  // Largest total weight covered by a weighted table.
  int max_weight() const;

  // Direct evaluation. Monte-Carlo influence valuations throw.
  Rational value(WorkerSet s, const std::vector<int>& weights) const;

  bool operator==(const Valuation& other) const;

 private:
  Kind kind_ = Kind::kWeighted;
  InfluenceMode mode_ = InfluenceMode::kExact;
  std::vector<Rational> values_;
  int explicit_n_ = 0;
  std::shared_ptr<const SynergyMatrix> matrix_;
  std::shared_ptr<const InfluenceNetwork> network_;
};

// Synergy value: row sums of S minus the edges internal to S counted once.
Rational synergy_value(const SynergyMatrix& m, WorkerSet s);

class CompetitionGame {
 public:
  CompetitionGame(std::vector<int> weights, std::vector<Valuation> valuations,
                  bool allow_single_firm = false);

  int n() const { return static_cast<int>(weights_.size()); }
  int k() const { return static_cast<int>(valuations_.size()); }
  const std::vector<int>& weights() const { return weights_; }
  int total_weight() const { return total_weight_; }
  int weight(WorkerSet s) const;
  // firm is 1..k.
  const Valuation& valuation(int firm) const { return valuations_.at(firm - 1); }
  const std::vector<Valuation>& valuations() const { return valuations_; }
  Rational value(int firm, WorkerSet s) const;
  bool all_weighted() const;
  bool unit_weights() const;
  bool is_symmetric() const;

  std::map<std::string, std::string> metadata;

 private:
  std::vector<int> weights_;
  std::vector<Valuation> valuations_;
  int total_weight_ = 0;
  // Tabulated values for non-weighted firms on small worker sets.
  std::vector<std::shared_ptr<const std::vector<Rational>>> tables_;
};

// assignment[j] in {0..k}; 0 is the idle pool.
struct Partition {
  std::vector<int> assignment;
  int k = 0;

  WorkerSet members_of(int firm) const;
  std::vector<WorkerSet> parts() const;  // index 0 is idle
  bool operator==(const Partition& other) const { return assignment == other.assignment; }
  bool operator<(const Partition& other) const { return assignment < other.assignment; }
};

Partition make_partition(const std::vector<WorkerSet>& firm_sets, int n);

struct Outcome {
  Partition partition;
  std::vector<Rational> payments;
};

Rational payment_total(const std::vector<Rational>& x, WorkerSet s);
std::vector<Rational> firm_profits(const CompetitionGame& game, const Outcome& outcome);
Rational social_welfare(const CompetitionGame& game, const Partition& partition);
std::vector<int> weight_profile(const CompetitionGame& game, const Partition& partition);

Rational evaluate(const Valuation& v, WorkerSet s, const std::vector<int>& weights);
Rational marginal(const Valuation& v, int j, WorkerSet s, const std::vector<int>& weights);

// Non-increasing unit increments.
bool is_concave_weighted(const Valuation& v);
// v(S)+v(T) >= v(S u T) for disjoint S,T, on the induced set function.
bool is_subadditive(const Valuation& v, const std::vector<int>& weights);
bool is_monotone(const Valuation& v, const std::vector<int>& weights);
bool is_submodular(const Valuation& v, const std::vector<int>& weights);

struct DemandResult {
  Rational profit;
  std::vector<WorkerSet> maximizers;  // ascending bitmask order
};

// All maximizers of v(S) - x(S).
DemandResult demand_set(const Valuation& v, const std::vector<Rational>& prices,
                        const std::vector<int>& weights);

struct BestResponse {
  Rational profit;
  WorkerSet bundle = 0;
};

// A single maximizer; weighted valuations use a min-cost-per-weight table.
BestResponse best_response(const Valuation& v, const std::vector<Rational>& prices,
                           const std::vector<int>& weights);

// Worker j with x'_j = x_j that is demanded under x but in no demanded set
// under x'.
std::optional<int> gs_violation(const Valuation& v, const std::vector<Rational>& x,
                                const std::vector<Rational>& x_raised,
                                const std::vector<int>& weights);

struct GsWitness {
  std::vector<Rational> x;
  std::vector<Rational> x_raised;
  int worker = -1;
};

// Sweeps raises of single prices to critical values from several base price
// vectors. Returns the first violation found.
std::optional<GsWitness> gs_sweep(const Valuation& v, const std::vector<int>& weights);

// Equivalence classes, each sorted, ordered by first member.
std::vector<std::vector<int>> worker_types(const CompetitionGame& game);
// type id per worker, consistent with worker_types ordering.
std::vector<int> type_index(const std::vector<std::vector<int>>& types, int n);

}  // namespace market_eq

#endif  // MARKET_EQ_GAME_HPP_
