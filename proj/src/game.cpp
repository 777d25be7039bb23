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

#include "market_eq/game.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "market_eq/network.hpp"

namespace market_eq {

std::vector<int> members(WorkerSet s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

WorkerSet make_set(const std::vector<int>& workers) {
  WorkerSet s = 0;
  for (int j : workers) {
    if (j < 0 || j >= 64) throw PreconditionError("worker index out of range");
    s |= WorkerSet{1} << j;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Valuation

Valuation Valuation::weighted(std::vector<Rational> values) {
  if (values.empty() || values[0] != 0) {
    throw PreconditionError("weighted valuation needs v(0) = 0");
  }
  for (size_t t = 1; t < values.size(); ++t) {
    if (values[t] < values[t - 1]) throw PreconditionError("weighted valuation is not monotone");
  }
  Valuation v;
  v.kind_ = Kind::kWeighted;
  v.values_ = std::move(values);
  return v;
}

Valuation Valuation::explicit_table(int n, std::vector<Rational> table) {
  if (n < 0 || n > kMaxExplicitWorkers) throw GuardError("explicit valuation limited to 20 workers");
  if (table.size() != (size_t{1} << n)) throw PreconditionError("explicit table must have 2^n entries");
  if (table[0] != 0) throw PreconditionError("explicit valuation needs v(empty) = 0");
  for (WorkerSet s = 1; s < table.size(); ++s) {
    for (int j = 0; j < n; ++j) {
      if (contains(s, j) && table[s] < table[s & ~(WorkerSet{1} << j)]) {
        throw PreconditionError("explicit valuation is not monotone");
      }
    }
  }
  Valuation v;
  v.kind_ = Kind::kExplicit;
  v.explicit_n_ = n;
  v.values_ = std::move(table);
  return v;
}

Valuation Valuation::synergy(std::shared_ptr<const SynergyMatrix> matrix) {
  if (!matrix) throw PreconditionError("null synergy matrix");
  Valuation v;
  v.kind_ = Kind::kSynergy;
  v.matrix_ = std::move(matrix);
  return v;
}

Valuation Valuation::influence(std::shared_ptr<const InfluenceNetwork> network, InfluenceMode mode) {
  if (!network) throw PreconditionError("null influence network");
  Valuation v;
  v.kind_ = Kind::kInfluence;
  v.network_ = std::move(network);
  v.mode_ = mode;
  return v;
}

const std::vector<Rational>& Valuation::weighted_values() const {
  if (kind_ != Kind::kWeighted) throw PreconditionError("not a weighted valuation");
  return values_;
}

const std::vector<Rational>& Valuation::table() const {
  if (kind_ != Kind::kExplicit) throw PreconditionError("not an explicit valuation");
  return values_;
}

const SynergyMatrix& Valuation::matrix() const {
  if (kind_ != Kind::kSynergy) throw PreconditionError("not a synergy valuation");
  return *matrix_;
}

const InfluenceNetwork& Valuation::network() const {
  if (kind_ != Kind::kInfluence) throw PreconditionError("not an influence valuation");
  return *network_;
}

int Valuation::max_weight() const { return static_cast<int>(weighted_values().size()) - 1; }

Rational synergy_value(const SynergyMatrix& m, WorkerSet s) {
  Rational total = 0;
  const auto in = members(s);
  for (int j : in) total += m.row_sum(j);
  for (size_t a = 0; a < in.size(); ++a) {
    for (size_t b = a + 1; b < in.size(); ++b) total -= m(in[a], in[b]);
  }
  return total;
}

Rational Valuation::value(WorkerSet s, const std::vector<int>& weights) const {
  switch (kind_) {
    case Kind::kWeighted: {
      long total = 0;
      for (int j : members(s)) {
        if (j >= static_cast<int>(weights.size())) throw PreconditionError("worker out of range");
        total += weights[j];
      }
      if (total >= static_cast<long>(values_.size())) {
        throw PreconditionError("total weight exceeds the value table");
      }
      return values_[total];
    }
    case Kind::kExplicit:
      if (s >= values_.size()) throw PreconditionError("subset out of range");
      return values_[s];
    case Kind::kSynergy:
      if (matrix_->size() < 64 && (s >> matrix_->size()) != 0) {
        throw PreconditionError("subset out of range");
      }
      return synergy_value(*matrix_, s);
    case Kind::kInfluence:
      if (mode_ == InfluenceMode::kMonteCarlo) {
        throw PreconditionError("Monte-Carlo valuation cannot be evaluated exactly");
      }
      if (network_->worker_count() < 64 && (s >> network_->worker_count()) != 0) {
        throw PreconditionError("subset out of range");
      }
      return influence_exact(*network_, s);
  }
  return 0;
}

bool Valuation::operator==(const Valuation& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::kWeighted:
      return values_ == other.values_;
    case Kind::kExplicit:
      return explicit_n_ == other.explicit_n_ && values_ == other.values_;
    case Kind::kSynergy:
      return matrix_ == other.matrix_ || *matrix_ == *other.matrix_;
    case Kind::kInfluence:
      return mode_ == other.mode_ && (network_ == other.network_ || *network_ == *other.network_);
  }
  return false;
}

// ---------------------------------------------------------------------------
// CompetitionGame

CompetitionGame::CompetitionGame(std::vector<int> weights, std::vector<Valuation> valuations,
                                 bool allow_single_firm)
    : weights_(std::move(weights)), valuations_(std::move(valuations)) {
  if (weights_.size() > 64) throw GuardError("at most 64 workers are supported");
  if (valuations_.size() < 2 && !(allow_single_firm && valuations_.size() == 1)) {
    throw PreconditionError("a game needs at least two firms");
  }
  for (int w : weights_) {
    if (w <= 0) throw PreconditionError("worker weights must be positive integers");
    total_weight_ += w;
  }
  const int n = this->n();
  tables_.resize(valuations_.size());
  for (size_t i = 0; i < valuations_.size(); ++i) {
    const Valuation& v = valuations_[i];
    switch (v.kind()) {
      case Valuation::Kind::kWeighted:
        if (v.max_weight() < total_weight_) {
          throw PreconditionError("weighted value table shorter than w(N)+1");
        }
        break;
      case Valuation::Kind::kExplicit:
        if (v.table().size() != (size_t{1} << n)) {
          throw PreconditionError("explicit table does not match the worker count");
        }
        break;
      case Valuation::Kind::kSynergy:
        if (v.matrix().size() != n) throw PreconditionError("synergy matrix size mismatch");
        if (n <= kMaxExplicitWorkers) {
          tables_[i] = std::make_shared<const std::vector<Rational>>(tabulate(v, weights_));
        }
        break;
      case Valuation::Kind::kInfluence:
        if (v.network().worker_count() != n) {
          throw PreconditionError("influence network worker count mismatch");
        }
        if (v.mode() == InfluenceMode::kExact && n <= 16) {
          // Reuse a table already computed for an identical network.
          for (size_t p = 0; p < i; ++p) {
            if (tables_[p] && valuations_[p] == v) tables_[i] = tables_[p];
          }
          if (!tables_[i]) {
            tables_[i] = std::make_shared<const std::vector<Rational>>(tabulate(v, weights_));
          }
        }
        break;
    }
  }
}

int CompetitionGame::weight(WorkerSet s) const {
  int total = 0;
  for (int j : members(s)) total += weights_.at(j);
  return total;
}

Rational CompetitionGame::value(int firm, WorkerSet s) const {
  if (firm < 1 || firm > k()) throw PreconditionError("firm index out of range");
  if (n() < 64 && (s >> n()) != 0) throw PreconditionError("subset out of range");
  const auto& table = tables_[firm - 1];
  if (table) return (*table)[s];
  return valuations_[firm - 1].value(s, weights_);
}

bool CompetitionGame::all_weighted() const {
  return std::all_of(valuations_.begin(), valuations_.end(),
                     [](const Valuation& v) { return v.kind() == Valuation::Kind::kWeighted; });
}

bool CompetitionGame::unit_weights() const {
  return std::all_of(weights_.begin(), weights_.end(), [](int w) { return w == 1; });
}

bool CompetitionGame::is_symmetric() const {
  for (size_t i = 1; i < valuations_.size(); ++i) {
    if (!(valuations_[i] == valuations_[0])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Partitions and outcomes

WorkerSet Partition::members_of(int firm) const {
  WorkerSet s = 0;
  for (size_t j = 0; j < assignment.size(); ++j) {
    if (assignment[j] == firm) s |= WorkerSet{1} << j;
  }
  return s;
}

std::vector<WorkerSet> Partition::parts() const {
  std::vector<WorkerSet> out(k + 1, 0);
  for (size_t j = 0; j < assignment.size(); ++j) out.at(assignment[j]) |= WorkerSet{1} << j;
  return out;
}

Partition make_partition(const std::vector<WorkerSet>& firm_sets, int n) {
  Partition p;
  p.k = static_cast<int>(firm_sets.size());
  p.assignment.assign(n, 0);
  for (size_t i = 0; i < firm_sets.size(); ++i) {
    for (int j : members(firm_sets[i])) {
      if (j >= n) throw PreconditionError("worker out of range");
      if (p.assignment[j] != 0) throw PreconditionError("firm sets overlap");
      p.assignment[j] = static_cast<int>(i) + 1;
    }
  }
  return p;
}

Rational payment_total(const std::vector<Rational>& x, WorkerSet s) {
  Rational total = 0;
  for (int j : members(s)) total += x.at(j);
  return total;
}

std::vector<Rational> firm_profits(const CompetitionGame& game, const Outcome& outcome) {
  const auto parts = outcome.partition.parts();
  std::vector<Rational> r(game.k());
  for (int i = 1; i <= game.k(); ++i) {
    r[i - 1] = game.value(i, parts[i]) - payment_total(outcome.payments, parts[i]);
  }
  return r;
}

Rational social_welfare(const CompetitionGame& game, const Partition& partition) {
  const auto parts = partition.parts();
  Rational total = 0;
  for (int i = 1; i <= game.k(); ++i) total += game.value(i, parts[i]);
  return total;
}

std::vector<int> weight_profile(const CompetitionGame& game, const Partition& partition) {
  const auto parts = partition.parts();
  std::vector<int> out;
  for (int i = 1; i <= game.k(); ++i) out.push_back(game.weight(parts[i]));
  return out;
}

// ---------------------------------------------------------------------------
// Predicates

Rational evaluate(const Valuation& v, WorkerSet s, const std::vector<int>& weights) {
  return v.value(s, weights);
}

Rational marginal(const Valuation& v, int j, WorkerSet s, const std::vector<int>& weights) {
  if (contains(s, j)) throw PreconditionError("marginal: worker already in the set");
  return v.value(s | (WorkerSet{1} << j), weights) - v.value(s, weights);
}

bool is_concave_weighted(const Valuation& v) {
  const auto& values = v.weighted_values();
  for (size_t t = 2; t < values.size(); ++t) {
    if (values[t] - values[t - 1] > values[t - 1] - values[t - 2]) return false;
  }
  return true;
}

namespace {

int worker_count_for(const Valuation& v, const std::vector<int>& weights) {
  switch (v.kind()) {
    case Valuation::Kind::kExplicit: {
      const size_t size = v.table().size();
      return std::countr_zero(size);
    }
    case Valuation::Kind::kSynergy:
      return v.matrix().size();
    case Valuation::Kind::kInfluence:
      return v.network().worker_count();
    case Valuation::Kind::kWeighted:
      break;
  }
  return static_cast<int>(weights.size());
}

std::vector<Rational> table_for(const Valuation& v, const std::vector<int>& weights, int n) {
  if (n > kMaxExplicitWorkers) throw GuardError("subset enumeration limited to 20 workers");
  if (v.kind() == Valuation::Kind::kExplicit) return v.table();
  std::vector<int> w = weights;
  w.resize(n, 1);
  return tabulate(v, w);
}

template <typename ValueFn>
DemandResult demand_from(ValueFn&& value, const std::vector<Rational>& prices, int n) {
  if (n > kMaxExplicitWorkers) throw GuardError("demand enumeration limited to 20 workers");
  const size_t count = size_t{1} << n;
  std::vector<Rational> cost(count);
  DemandResult result;
  bool first = true;
  for (WorkerSet s = 0; s < count; ++s) {
    if (s) cost[s] = cost[s & (s - 1)] + prices[std::countr_zero(s)];
    Rational profit = value(s) - cost[s];
    if (first || profit > result.profit) {
      result.profit = std::move(profit);
      result.maximizers.assign(1, s);
      first = false;
    } else if (profit == result.profit) {
      result.maximizers.push_back(s);
    }
  }
  return result;
}

}  // namespace

bool is_monotone(const Valuation& v, const std::vector<int>& weights) {
  if (v.kind() == Valuation::Kind::kWeighted) {
    const auto& values = v.weighted_values();
    return std::is_sorted(values.begin(), values.end());
  }
  const int n = worker_count_for(v, weights);
  const auto table = table_for(v, weights, n);
  for (WorkerSet s = 1; s < table.size(); ++s) {
    for (int j : members(s)) {
      if (table[s] < table[s & ~(WorkerSet{1} << j)]) return false;
    }
  }
  return true;
}

bool is_subadditive(const Valuation& v, const std::vector<int>& weights) {
  if (v.kind() == Valuation::Kind::kWeighted) {
    // Pairwise subadditivity over achievable disjoint weight pairs.
    const int n = static_cast<int>(weights.size());
    if (n <= kMaxExplicitWorkers) {
      const auto table = table_for(v, weights, n);
      const WorkerSet all = full_set(n);
      for (WorkerSet s = 1; s <= all; ++s) {
        const WorkerSet rest = all & ~s;
        for (WorkerSet t = rest; t; t = (t - 1) & rest) {
          if (table[s | t] > table[s] + table[t]) return false;
        }
      }
      return true;
    }
    const auto& values = v.weighted_values();
    for (size_t a = 0; a < values.size(); ++a) {
      for (size_t b = 0; a + b < values.size(); ++b) {
        if (values[a + b] > values[a] + values[b]) return false;
      }
    }
    return true;
  }
  const int n = worker_count_for(v, weights);
  const auto table = table_for(v, weights, n);
  const WorkerSet all = full_set(n);
  for (WorkerSet s = 1; s <= all; ++s) {
    const WorkerSet rest = all & ~s;
    for (WorkerSet t = rest; t; t = (t - 1) & rest) {
      if (table[s | t] > table[s] + table[t]) return false;
    }
  }
  return true;
}

bool is_submodular(const Valuation& v, const std::vector<int>& weights) {
  const int n = worker_count_for(v, weights);
  const auto table = table_for(v, weights, n);
  // Marginals non-increasing: m(j, S) >= m(j, S + i) for all S, i, j outside S.
  for (WorkerSet s = 0; s < table.size(); ++s) {
    for (int j = 0; j < n; ++j) {
      if (contains(s, j)) continue;
      const WorkerSet sj = s | (WorkerSet{1} << j);
      for (int i = j + 1; i < n; ++i) {
        if (contains(s, i)) continue;
        const WorkerSet si = s | (WorkerSet{1} << i);
        if (table[sj] + table[si] < table[sj | si] + table[s]) return false;
      }
    }
  }
  return true;
}

DemandResult demand_set(const Valuation& v, const std::vector<Rational>& prices,
                        const std::vector<int>& weights) {
  const int n = worker_count_for(v, weights);
  if (static_cast<int>(prices.size()) != n) throw PreconditionError("price vector size mismatch");
  if (v.kind() == Valuation::Kind::kWeighted || v.kind() == Valuation::Kind::kExplicit) {
    return demand_from([&](WorkerSet s) { return v.value(s, weights); }, prices, n);
  }
  const auto table = table_for(v, weights, n);
  return demand_from([&](WorkerSet s) { return table[s]; }, prices, n);
}

BestResponse best_response(const Valuation& v, const std::vector<Rational>& prices,
                           const std::vector<int>& weights) {
  if (v.kind() != Valuation::Kind::kWeighted) {
    const DemandResult d = demand_set(v, prices, weights);
    return {d.profit, d.maximizers.front()};
  }
  const auto& values = v.weighted_values();
  const int n = static_cast<int>(weights.size());
  if (static_cast<int>(prices.size()) != n) throw PreconditionError("price vector size mismatch");
  int total = 0;
  for (int w : weights) total += w;
  if (total >= static_cast<int>(values.size())) {
    throw PreconditionError("total weight exceeds the value table");
  }
  // layer[j][t]: cheapest subset of exact weight t among the first j workers.
  std::vector<std::vector<std::optional<Rational>>> layer(n + 1);
  layer[0].assign(total + 1, std::nullopt);
  layer[0][0] = Rational(0);
  for (int j = 0; j < n; ++j) {
    layer[j + 1] = layer[j];
    for (int t = 0; t + weights[j] <= total; ++t) {
      if (!layer[j][t]) continue;
      Rational c = *layer[j][t] + prices[j];
      auto& target = layer[j + 1][t + weights[j]];
      if (!target || c < *target) target = std::move(c);
    }
  }
  BestResponse best;
  int best_t = -1;
  for (int t = 0; t <= total; ++t) {
    if (!layer[n][t]) continue;
    Rational profit = values[t] - *layer[n][t];
    if (best_t < 0 || profit > best.profit) {
      best.profit = std::move(profit);
      best_t = t;
    }
  }
  int t = best_t;
  for (int j = n - 1; j >= 0 && t > 0; --j) {
    if (layer[j + 1][t] == layer[j][t]) continue;
    best.bundle |= WorkerSet{1} << j;
    t -= weights[j];
  }
  return best;
}

std::optional<int> gs_violation(const Valuation& v, const std::vector<Rational>& x,
                                const std::vector<Rational>& x_raised,
                                const std::vector<int>& weights) {
  if (x.size() != x_raised.size()) throw PreconditionError("price vectors differ in size");
  for (size_t j = 0; j < x.size(); ++j) {
    if (x_raised[j] < x[j]) throw PreconditionError("raised prices must dominate the base prices");
  }
  const DemandResult before = demand_set(v, x, weights);
  const DemandResult after = demand_set(v, x_raised, weights);
  WorkerSet demanded_before = 0;
  WorkerSet demanded_after = 0;
  for (WorkerSet s : before.maximizers) demanded_before |= s;
  for (WorkerSet s : after.maximizers) demanded_after |= s;
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] != x_raised[j]) continue;
    if (contains(demanded_before, static_cast<int>(j)) &&
        !contains(demanded_after, static_cast<int>(j))) {
      return static_cast<int>(j);
    }
  }
  return std::nullopt;
}

std::optional<GsWitness> gs_sweep(const Valuation& v, const std::vector<int>& weights) {
  const int n = worker_count_for(v, weights);
  if (n > 10) throw GuardError("gross-substitutes sweep limited to 10 workers");
  const auto table = table_for(v, weights, n);
  const WorkerSet all = full_set(n);
  std::vector<std::vector<Rational>> bases;
  bases.emplace_back(n, Rational(0));
  std::vector<Rational> singles(n), last(n), halves(n);
  for (int j = 0; j < n; ++j) {
    const WorkerSet bit = WorkerSet{1} << j;
    singles[j] = table[bit];
    last[j] = table[all] - table[all & ~bit];
    halves[j] = singles[j] / 2;
  }
  bases.push_back(singles);
  bases.push_back(last);
  bases.push_back(halves);
  for (const auto& x : bases) {
    for (int j = 0; j < n; ++j) {
      const WorkerSet bit = WorkerSet{1} << j;
      std::set<Rational> critical;
      for (WorkerSet s = 0; s <= all; ++s) {
        if (s & bit) continue;
        const Rational m = table[s | bit] - table[s];
        if (m > x[j]) critical.insert(m);
      }
      for (const Rational& price : critical) {
        std::vector<Rational> raised = x;
        raised[j] = price;
        if (auto w = gs_violation(v, x, raised, weights)) return GsWitness{x, raised, *w};
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<int>> worker_types(const CompetitionGame& game) {
  const int n = game.n();
  bool need_tables = false;
  for (const auto& v : game.valuations()) need_tables |= v.kind() != Valuation::Kind::kWeighted;
  if (need_tables && n > kMaxExplicitWorkers) {
    throw GuardError("type detection limited to 20 workers for non-weighted valuations");
  }
  auto equivalent = [&](int a, int b) {
    if (game.weights()[a] != game.weights()[b] && game.all_weighted()) return false;
    const WorkerSet ba = WorkerSet{1} << a;
    const WorkerSet bb = WorkerSet{1} << b;
    for (int i = 1; i <= game.k(); ++i) {
      const Valuation& v = game.valuation(i);
      if (v.kind() == Valuation::Kind::kWeighted) {
        if (game.weights()[a] != game.weights()[b]) return false;
        continue;
      }
      const WorkerSet rest = full_set(n) & ~(ba | bb);
      for (WorkerSet s = rest;; s = (s - 1) & rest) {
        if (game.value(i, s | ba) != game.value(i, s | bb)) return false;
        if (s == 0) break;
      }
    }
    return true;
  };
  std::vector<std::vector<int>> classes;
  for (int j = 0; j < n; ++j) {
    bool placed = false;
    for (auto& cls : classes) {
      if (equivalent(cls.front(), j)) {
        cls.push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({j});
  }
  return classes;
}

std::vector<int> type_index(const std::vector<std::vector<int>>& types, int n) {
  std::vector<int> out(n, -1);
  for (size_t t = 0; t < types.size(); ++t) {
    for (int j : types[t]) out.at(j) = static_cast<int>(t);
  }
  return out;
}

}  // namespace market_eq
