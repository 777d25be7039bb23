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

// Brute-force oracles and random instance builders shared by the unit and
// acceptance tests. Oracles here deliberately avoid the library's own search
// routines: they enumerate.

#ifndef MARKET_EQ_TESTS_TEST_SUPPORT_HPP_
#define MARKET_EQ_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "market_eq/game.hpp"
#include "market_eq/io.hpp"
#include "market_eq/network_types.hpp"

namespace market_eq::testing {

inline std::string fixture_path(const std::string& name) { return std::string(MARKET_EQ_FIXTURES) + "/" + name; }

inline CompetitionGame load_game(const std::string& name) { return game_from_json(read_json_file(fixture_path(name))); }

inline Outcome load_outcome(const std::string& name, const CompetitionGame& game) {
  return outcome_from_json(read_json_file(fixture_path(name)), game);
}

inline Rational r(const char* text) { return parse_rational(text); }

// Value of a worker set straight from the firm's definition.
inline Rational oracle_value(const CompetitionGame& game, int firm, WorkerSet s) {
  return game.valuation(firm).value(s, game.weights());
}

// max_i max_S [v_i(S) - x(S)] - r_i over every subset S.
inline Rational oracle_gap(const CompetitionGame& game, const Outcome& o) {
  const int n = game.n();
  Rational worst = 0;
  for (int i = 1; i <= game.k(); ++i) {
    Rational own = oracle_value(game, i, o.partition.members_of(i)) -
                   payment_total(o.payments, o.partition.members_of(i));
    for (WorkerSet s = 0; s < (WorkerSet{1} << n); ++s) {
      Rational gain = oracle_value(game, i, s) - payment_total(o.payments, s) - own;
      if (gain > worst) worst = gain;
    }
  }
  return worst;
}

// Max welfare over all (k+1)^n assignments (idle allowed).
inline Rational oracle_welfare(const CompetitionGame& game) {
  const int n = game.n(), k = game.k();
  std::vector<int> a(n, 0);
  Rational best = 0;
  while (true) {
    std::vector<WorkerSet> parts(k + 1, 0);
    for (int j = 0; j < n; ++j) parts[a[j]] |= WorkerSet{1} << j;
    Rational sw = 0;
    for (int i = 1; i <= k; ++i) sw += oracle_value(game, i, parts[i]);
    if (sw > best) best = sw;
    int j = 0;
    while (j < n && a[j] == k) a[j++] = 0;
    if (j == n) break;
    ++a[j];
  }
  return best;
}

// Expected number of activated non-seed nodes, enumerating all live-edge
// subsets of the probabilistic edges.
inline Rational oracle_influence(const InfluenceNetwork& net, WorkerSet seeds) {
  std::vector<int> prob;
  for (size_t e = 0; e < net.edges().size(); ++e) {
    if (net.edges()[e].probability != 1) prob.push_back(static_cast<int>(e));
  }
  Rational total = 0;
  const std::vector<int>& workers = net.workers();
  for (std::uint64_t live = 0; live < (std::uint64_t{1} << prob.size()); ++live) {
    Rational p = 1;
    std::vector<bool> alive(net.edges().size(), true);
    for (size_t b = 0; b < prob.size(); ++b) {
      const Rational& q = net.edges()[prob[b]].probability;
      if ((live >> b) & 1) {
        p *= q;
      } else {
        p *= 1 - q;
        alive[prob[b]] = false;
      }
    }
    std::vector<bool> on(net.node_count(), false), is_seed(net.node_count(), false);
    std::vector<int> stack;
    for (int j : members(seeds)) {
      on[workers[j]] = is_seed[workers[j]] = true;
      stack.push_back(workers[j]);
    }
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (size_t e = 0; e < net.edges().size(); ++e) {
        const Edge& ed = net.edges()[e];
        if (ed.from == u && alive[e] && !on[ed.to]) {
          on[ed.to] = true;
          stack.push_back(ed.to);
        }
      }
    }
    int count = 0;
    for (int v = 0; v < net.node_count(); ++v) count += on[v] && !is_seed[v];
    total += p * count;
  }
  return total;
}

// Edges of the synergy graph touching S: self-edges of S, edges inside S
// once, edges from S to the rest.
inline Rational oracle_synergy(const SynergyMatrix& m, WorkerSet s) {
  Rational v = 0;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = i; j < m.size(); ++j) {
      if (contains(s, i) || contains(s, j)) v += m(i, j);
    }
  }
  return v;
}

inline Rational random_unit(std::mt19937_64& rng, int denominator = 64) {
  return ratio(static_cast<long>(rng() % (denominator + 1)), denominator);
}

// Concave weighted table: sorted random increments.
inline Valuation random_concave(int total, std::mt19937_64& rng) {
  std::vector<Rational> inc;
  for (int t = 0; t < total; ++t) inc.push_back(random_unit(rng));
  std::sort(inc.begin(), inc.end(), std::greater<>());
  std::vector<Rational> v{0};
  for (const auto& d : inc) v.push_back(v.back() + d);
  return Valuation::weighted(v);
}

inline Valuation random_monotone(int total, std::mt19937_64& rng) {
  std::vector<Rational> v{0};
  for (int t = 0; t < total; ++t) v.push_back(v.back() + random_unit(rng));
  return Valuation::weighted(v);
}

inline std::vector<int> random_weights(int n, int lo, int hi, std::mt19937_64& rng) {
  std::vector<int> w;
  for (int j = 0; j < n; ++j) w.push_back(lo + static_cast<int>(rng() % (hi - lo + 1)));
  return w;
}

inline SynergyMatrix random_synergy(int n, int max_entry, std::mt19937_64& rng, bool self_edges = true) {
  SynergyMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == j && !self_edges) continue;
      m.set(i, j, Rational(static_cast<long>(rng() % (max_entry + 1))));
    }
  }
  return m;
}

}  // namespace market_eq::testing

#endif  // MARKET_EQ_TESTS_TEST_SUPPORT_HPP_
