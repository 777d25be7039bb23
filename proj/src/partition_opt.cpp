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

#include "market_eq/partition_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

#include "market_eq/lp.hpp"

namespace market_eq {

Guards Guards::unlimited() {
  Guards g;
  g.dp_states = 1e300;
  g.enumeration = 1e300;
  g.config_lp_workers = 20;
  g.max_cut_workers = 40;
  g.brute_force_workers = 20;
  return g;
}

namespace {

Partition from_string(const std::string& labels, int k) {
  Partition p;
  p.k = k;
  for (char c : labels) p.assignment.push_back(static_cast<int>(c));
  return p;
}

}  // namespace

std::map<std::vector<int>, std::vector<int>> reachable_weight_profiles(
    const CompetitionGame& game, const Guards& guards) {
  if (!game.all_weighted()) throw PreconditionError("weight-profile table needs weighted valuations");
  const int k = game.k();
  const int total = game.total_weight();
  if (std::pow(static_cast<double>(std::max(total, 1)), k) > guards.dp_states ||
      std::pow(static_cast<double>(total + 1), k) > 1.8e19) {
    throw GuardError("weight-profile table exceeds the state guard (W^k)");
  }
  const std::uint64_t base = static_cast<std::uint64_t>(total) + 1;
  std::vector<std::uint64_t> place(k, 1);
  for (int i = 1; i < k; ++i) place[i] = place[i - 1] * base;

  std::unordered_map<std::uint64_t, std::string> layer{{0, std::string()}};
  for (int j = 0; j < game.n(); ++j) {
    std::unordered_map<std::uint64_t, std::string> next;
    next.reserve(layer.size() * k);
    const std::uint64_t w = static_cast<std::uint64_t>(game.weights()[j]);
    for (const auto& [key, labels] : layer) {
      for (int i = 0; i < k; ++i) {
        std::string candidate = labels;
        candidate.push_back(static_cast<char>(i + 1));
        auto [it, inserted] = next.try_emplace(key + w * place[i], candidate);
        if (!inserted && candidate < it->second) it->second = std::move(candidate);
      }
    }
    layer = std::move(next);
  }
  std::map<std::vector<int>, std::vector<int>> out;
  for (const auto& [key, labels] : layer) {
    std::vector<int> totals(k);
    std::uint64_t rest = key;
    for (int i = 0; i < k; ++i) {
      totals[i] = static_cast<int>(rest % base);
      rest /= base;
    }
    out.emplace(std::move(totals), from_string(labels, k).assignment);
  }
  return out;
}

WeightedOptimum optimal_partition_weighted(const CompetitionGame& game, const Guards& guards) {
  const auto profiles = reachable_weight_profiles(game, guards);
  WeightedOptimum best;
  bool found = false;
  for (const auto& [totals, assignment] : profiles) {
    Rational welfare = 0;
    for (int i = 0; i < game.k(); ++i) welfare += game.valuation(i + 1).weighted_values()[totals[i]];
    if (!found || welfare > best.profile.welfare ||
        (welfare == best.profile.welfare && assignment < best.partition.assignment)) {
      best.profile.totals = totals;
      best.profile.welfare = std::move(welfare);
      best.partition.assignment = assignment;
      best.partition.k = game.k();
      found = true;
    }
  }
  return best;
}

std::optional<Partition> almost_balanced_partition(const CompetitionGame& game,
                                                   const Guards& guards) {
  const auto profiles = reachable_weight_profiles(game, guards);
  std::optional<Partition> best;
  for (const auto& [totals, assignment] : profiles) {
    const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
    if (*hi - *lo > 1) continue;
    if (!best || assignment < best->assignment) best = Partition{assignment, game.k()};
  }
  return best;
}

namespace {

double binomial(int n, int r) {
  double out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// Sorts the labels of each type ascending in worker-index order.
std::vector<int> fill_by_type(const std::vector<int>& assignment,
                              const std::vector<std::vector<int>>& types) {
  std::vector<int> out(assignment.size());
  for (const auto& cls : types) {
    std::vector<int> labels;
    for (int j : cls) labels.push_back(assignment[j]);
    std::sort(labels.begin(), labels.end());
    for (size_t t = 0; t < cls.size(); ++t) out[cls[t]] = labels[t];
  }
  return out;
}

}  // namespace

std::vector<Partition> enumerate_optimal_partitions(const CompetitionGame& game,
                                                    const Guards& guards) {
  const int k = game.k();
  const int n = game.n();
  const auto types = worker_types(game);
  double count = 1;
  for (const auto& cls : types) count *= binomial(static_cast<int>(cls.size()) + k - 1, k - 1);
  if (count > guards.enumeration) {
    throw GuardError("partition enumeration exceeds the guard (" + std::to_string(count) + ")");
  }

  std::vector<WorkerSet> sets(k, 0);
  std::vector<int> assignment(n, 0);
  Rational best;
  bool found = false;
  std::vector<std::vector<int>> optimal;

  // Distributes type t's workers among firms; counts are non-increasing
  // labels in index order.
  auto recurse = [&](auto&& self, size_t t) -> void {
    if (t == types.size()) {
      Rational welfare = 0;
      for (int i = 0; i < k; ++i) welfare += game.value(i + 1, sets[i]);
      if (!found || welfare > best) {
        best = std::move(welfare);
        optimal.clear();
        found = true;
        optimal.push_back(assignment);
      } else if (welfare == best) {
        optimal.push_back(assignment);
      }
      return;
    }
    const auto& cls = types[t];
    const int size = static_cast<int>(cls.size());
    // Worker cls[p] goes to firm label[p]; labels non-decreasing.
    auto place = [&](auto&& place_self, int pos, int min_label) -> void {
      if (pos == size) {
        self(self, t + 1);
        return;
      }
      const WorkerSet bit = WorkerSet{1} << cls[pos];
      for (int label = min_label; label <= k; ++label) {
        sets[label - 1] |= bit;
        assignment[cls[pos]] = label;
        place_self(place_self, pos + 1, label);
        sets[label - 1] &= ~bit;
      }
      assignment[cls[pos]] = 0;
    };
    place(place, 0, 1);
  };
  recurse(recurse, 0);

  // Relabelings among identical firms.
  std::vector<std::vector<int>> relabelings;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    bool valid = true;
    for (int i = 0; i < k && valid; ++i) {
      valid = game.valuation(i + 1) == game.valuation(perm[i]);
    }
    if (valid) relabelings.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::set<std::vector<int>> canonical;
  for (const auto& a : optimal) {
    std::vector<int> smallest;
    for (const auto& pi : relabelings) {
      std::vector<int> relabeled(n);
      for (int j = 0; j < n; ++j) relabeled[j] = a[j] == 0 ? 0 : pi[a[j] - 1];
      relabeled = fill_by_type(relabeled, types);
      if (smallest.empty() || relabeled < smallest) smallest = std::move(relabeled);
    }
    canonical.insert(std::move(smallest));
  }
  std::vector<Partition> out;
  for (const auto& a : canonical) out.push_back(Partition{a, k});
  return out;
}

Partition optimal_partition(const CompetitionGame& game, const Guards& guards) {
  if (game.all_weighted()) return optimal_partition_weighted(game, guards).partition;
  const auto all = enumerate_optimal_partitions(game, guards);
  return all.front();
}

Rational optimal_welfare(const CompetitionGame& game, const Guards& guards) {
  if (game.all_weighted()) return optimal_partition_weighted(game, guards).profile.welfare;
  return social_welfare(game, enumerate_optimal_partitions(game, guards).front());
}

Rational brute_force_welfare(const CompetitionGame& game, const Guards& guards) {
  const int n = game.n();
  const int k = game.k();
  if (n > guards.brute_force_workers || std::pow(k, n) > 1e8) {
    throw GuardError("brute-force enumeration exceeds the guard");
  }
  std::vector<int> a(n, 0);
  Rational best;
  bool found = false;
  for (;;) {
    std::vector<WorkerSet> sets(k, 0);
    for (int j = 0; j < n; ++j) sets[a[j]] |= WorkerSet{1} << j;
    Rational welfare = 0;
    for (int i = 0; i < k; ++i) welfare += game.value(i + 1, sets[i]);
    if (!found || welfare > best) {
      best = std::move(welfare);
      found = true;
    }
    int j = 0;
    while (j < n && ++a[j] == k) a[j++] = 0;
    if (j == n) break;
  }
  return best;
}

Rational cut_weight(const SynergyMatrix& m, const Partition& partition) {
  Rational total = 0;
  const int n = m.size();
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const int a = partition.assignment[j];
      const int b = partition.assignment[l];
      if (a != 0 && b != 0 && a != b) total += m(j, l);
    }
  }
  return total;
}

Partition max_cut_two_firm(const SynergyMatrix& m, const Guards& guards) {
  const int n = m.size();
  if (n > guards.max_cut_workers) throw GuardError("max-cut search exceeds the worker guard");
  Partition p;
  p.k = 2;
  p.assignment.assign(n, 1);
  if (n <= 1) return p;
  mpz_class lcm = 1;
  for (const auto& e : m.entries()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den().get_mpz_t());
  std::vector<std::int64_t> w(static_cast<size_t>(n) * n);
  mpz_class bound = 1;
  bound <<= 62;
  bound /= static_cast<long>(n) * n;
  for (size_t i = 0; i < w.size(); ++i) {
    mpz_class scaled = m.entries()[i].get_num() * (lcm / m.entries()[i].get_den());
    if (scaled > bound) throw GuardError("synergy entries too large for integer cut search");
    w[i] = scaled.get_si();
  }
  std::vector<char> side(n, 0);  // 1 means firm 2
  std::int64_t cut = 0;
  std::int64_t best = 0;
  WorkerSet best_mask = 0;
  WorkerSet mask = 0;
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  for (std::uint64_t g = 1; g < limit; ++g) {
    const int j = std::countr_zero(g) + 1;
    std::int64_t same = 0;
    std::int64_t other = 0;
    for (int l = 0; l < n; ++l) {
      if (l == j) continue;
      if (side[l] == side[j]) {
        same += w[j * n + l];
      } else {
        other += w[j * n + l];
      }
    }
    cut += same - other;
    side[j] ^= 1;
    mask ^= WorkerSet{1} << j;
    if (cut > best) {
      best = cut;
      best_mask = mask;
    } else if (cut == best) {
      const WorkerSet diff = mask ^ best_mask;
      if (diff && !contains(mask, std::countr_zero(diff))) best_mask = mask;
    }
  }
  for (int j = 0; j < n; ++j) p.assignment[j] = contains(best_mask, j) ? 2 : 1;
  return p;
}

GapReport configuration_lp(const CompetitionGame& game, const Guards& guards) {
  const int n = game.n();
  const int k = game.k();
  if (n > guards.config_lp_workers) throw GuardError("configuration LP exceeds the worker guard");
  const WorkerSet all = full_set(n);
  const int bundles = static_cast<int>(all);
  LinearProgram lp;
  lp.variables = k * bundles;
  lp.objective.resize(lp.variables);
  for (int i = 0; i < k; ++i) {
    for (WorkerSet s = 1; s <= all; ++s) lp.objective[i * bundles + (s - 1)] = game.value(i + 1, s);
  }
  for (int i = 0; i < k; ++i) {
    std::vector<Rational> row(lp.variables);
    for (int b = 0; b < bundles; ++b) row[i * bundles + b] = 1;
    lp.add_row(std::move(row), 1);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> row(lp.variables);
    for (int i = 0; i < k; ++i) {
      for (WorkerSet s = 1; s <= all; ++s) {
        if (contains(s, j)) row[i * bundles + (s - 1)] = 1;
      }
    }
    lp.add_row(std::move(row), 1);
  }
  const LpResult result = solve_lp(lp);
  if (result.status != LpStatus::kOptimal) throw Error("configuration LP did not reach an optimum");
  GapReport report;
  report.fractional = result.objective_value;
  report.integral = k == 1 ? game.value(1, all) : optimal_welfare(game, guards);
  report.ratio = report.integral == 0 ? Rational(1) : Rational(report.fractional / report.integral);
  return report;
}

}  // namespace market_eq
