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

#include "market_eq/network.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

namespace market_eq {

// ---------------------------------------------------------------------------
// Types

SynergyMatrix::SynergyMatrix(int n) : n_(n), entries_(static_cast<size_t>(n) * n) {
  if (n < 0 || n > 64) throw PreconditionError("synergy matrix size out of range");
}

SynergyMatrix::SynergyMatrix(int n, std::vector<Rational> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 0 || n > 64) throw PreconditionError("synergy matrix size out of range");
  if (entries_.size() != static_cast<size_t>(n) * n) {
    throw PreconditionError("synergy matrix needs n*n entries");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((*this)(i, j) < 0) throw PreconditionError("synergy entries must be non-negative");
      if ((*this)(i, j) != (*this)(j, i)) throw PreconditionError("synergy matrix must be symmetric");
    }
  }
}

void SynergyMatrix::set(int i, int j, const Rational& value) {
  if (value < 0) throw PreconditionError("synergy entries must be non-negative");
  entries_.at(i * n_ + j) = value;
  entries_.at(j * n_ + i) = value;
}

Rational SynergyMatrix::row_sum(int i) const {
  Rational total = 0;
  for (int j = 0; j < n_; ++j) total += (*this)(i, j);
  return total;
}

InfluenceNetwork::InfluenceNetwork(int nodes, std::vector<int> workers, std::vector<Edge> edges)
    : nodes_(nodes), workers_(std::move(workers)), edges_(std::move(edges)) {
  if (nodes_ < 0) throw PreconditionError("negative node count");
  if (workers_.size() > 64) throw GuardError("at most 64 workers are supported");
  std::vector<char> seen(nodes_, 0);
  for (int w : workers_) {
    if (w < 0 || w >= nodes_) throw PreconditionError("worker node out of range");
    if (seen[w]) throw PreconditionError("duplicate worker node");
    seen[w] = 1;
  }
  out_.assign(nodes_, {});
  for (size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.from < 0 || edge.from >= nodes_ || edge.to < 0 || edge.to >= nodes_) {
      throw PreconditionError("edge endpoint out of range");
    }
    if (edge.probability <= 0 || edge.probability > 1) {
      throw PreconditionError("edge probability must lie in (0,1]");
    }
    out_[edge.from].push_back(static_cast<int>(e));
  }
}

bool InfluenceNetwork::deterministic() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.probability == 1; });
}

// ---------------------------------------------------------------------------
// Influence

namespace {

std::vector<int> seed_nodes(const InfluenceNetwork& network, WorkerSet seeds) {
  std::vector<int> out;
  for (int j : members(seeds)) {
    if (j >= network.worker_count()) throw PreconditionError("seed worker out of range");
    out.push_back(network.workers()[j]);
  }
  return out;
}

int reach_count(const InfluenceNetwork& network, const std::vector<int>& seeds) {
  std::vector<char> active(network.node_count(), 0);
  std::vector<int> stack;
  for (int s : seeds) {
    active[s] = 1;
    stack.push_back(s);
  }
  int count = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int e : network.out_edges()[u]) {
      const int v = network.edges()[e].to;
      if (active[v]) continue;
      active[v] = 1;
      ++count;
      stack.push_back(v);
    }
  }
  return count;
}

struct CascadeState {
  std::vector<char> active;
  std::vector<int> pending;
  int count = 0;
};

void activate(const InfluenceNetwork& network, CascadeState& state, int node) {
  state.active[node] = 1;
  for (int e : network.out_edges()[node]) state.pending.push_back(e);
}

// Branches only on edges whose head is still inactive when the edge is
// examined; other coins do not affect the outcome.
void explore(const InfluenceNetwork& network, CascadeState state, const Rational& weight,
             Rational& total) {
  while (!state.pending.empty()) {
    const int e = state.pending.back();
    state.pending.pop_back();
    const Edge& edge = network.edges()[e];
    if (state.active[edge.to]) continue;
    if (edge.probability == 1) {
      ++state.count;
      activate(network, state, edge.to);
      continue;
    }
    CascadeState live = state;
    ++live.count;
    activate(network, live, edge.to);
    explore(network, std::move(live), weight * edge.probability, total);
    explore(network, std::move(state), weight * (1 - edge.probability), total);
    return;
  }
  total += weight * state.count;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t edge_coin(std::uint64_t seed, std::uint64_t sample, std::uint64_t edge) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (sample * 0xD1B54A32D192ED03ULL));
  return splitmix64(h ^ (edge * 0x8CB92BA72F3D8DD7ULL));
}

// floor(p * 2^64), saturating below 2^64 for p < 1.
std::uint64_t coin_threshold(const Rational& p) {
  mpz_class scaled = p.get_num();
  scaled <<= 64;
  scaled /= p.get_den();
  mpz_class limit = 1;
  limit <<= 64;
  if (scaled >= limit) return ~std::uint64_t{0};
  const std::uint64_t hi = mpz_class(scaled >> 32).get_ui();
  const std::uint64_t lo = mpz_class(scaled & mpz_class(0xFFFFFFFFUL)).get_ui();
  return (hi << 32) | lo;
}

}  // namespace

Rational influence_exact(const InfluenceNetwork& network, WorkerSet seeds,
                         int max_probabilistic_edges) {
  const auto sources = seed_nodes(network, seeds);
  if (network.deterministic()) return reach_count(network, sources);
  int probabilistic = 0;
  for (const auto& e : network.edges()) probabilistic += e.probability != 1;
  if (max_probabilistic_edges >= 0 && probabilistic > max_probabilistic_edges) {
    throw GuardError("exact influence limited to " + std::to_string(max_probabilistic_edges) +
                     " probabilistic edges");
  }
  CascadeState state;
  state.active.assign(network.node_count(), 0);
  for (int s : sources) {
    if (!state.active[s]) activate(network, state, s);
  }
  Rational total = 0;
  explore(network, std::move(state), Rational(1), total);
  return total;
}

MonteCarloEstimate influence_monte_carlo(const InfluenceNetwork& network, WorkerSet seeds,
                                         std::int64_t samples, std::uint64_t seed, int threads) {
  if (samples < 1) throw PreconditionError("Monte-Carlo estimate needs at least one sample");
  const auto sources = seed_nodes(network, seeds);
  std::vector<std::uint64_t> thresholds;
  std::vector<char> certain;
  for (const auto& e : network.edges()) {
    certain.push_back(e.probability == 1);
    thresholds.push_back(e.probability == 1 ? 0 : coin_threshold(e.probability));
  }
  threads = std::max(1, threads);
  struct Partial {
    std::int64_t sum = 0;
    unsigned __int128 squares = 0;
  };
  std::vector<Partial> partial(threads);
  auto run = [&](int worker, std::int64_t begin, std::int64_t end) {
    std::vector<std::uint32_t> stamp(network.node_count(), 0);
    std::vector<int> stack;
    Partial acc;
    for (std::int64_t s = begin; s < end; ++s) {
      const std::uint32_t mark = static_cast<std::uint32_t>(s - begin + 1);
      stack.clear();
      for (int v : sources) {
        stamp[v] = mark;
        stack.push_back(v);
      }
      std::int64_t count = 0;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int e : network.out_edges()[u]) {
          const int v = network.edges()[e].to;
          if (stamp[v] == mark) continue;
          if (!certain[e] && edge_coin(seed, static_cast<std::uint64_t>(s), e) >= thresholds[e]) {
            continue;
          }
          stamp[v] = mark;
          ++count;
          stack.push_back(v);
        }
      }
      acc.sum += count;
      acc.squares += static_cast<unsigned __int128>(count) * count;
    }
    partial[worker] = acc;
  };
  const std::int64_t chunk = (samples + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t begin = std::min(samples, t * chunk);
    const std::int64_t end = std::min(samples, begin + chunk);
    if (t == 0) continue;
    pool.emplace_back(run, t, begin, end);
  }
  run(0, 0, std::min(samples, chunk));
  for (auto& th : pool) th.join();
  std::int64_t sum = 0;
  unsigned __int128 squares = 0;
  for (const auto& p : partial) {
    sum += p.sum;
    squares += p.squares;
  }
  MonteCarloEstimate out;
  out.samples = samples;
  out.mean = Rational(mpz_class(std::to_string(sum)), mpz_class(std::to_string(samples)));
  out.mean.canonicalize();
  out.estimate = out.mean.get_d();
  const double n = static_cast<double>(samples);
  const double mean_square = static_cast<double>(squares) / n;
  const double variance = samples > 1 ? std::max(0.0, (mean_square - out.estimate * out.estimate) * n / (n - 1)) : 0.0;
  out.standard_error = std::sqrt(variance / n);
  return out;
}

int sparsity(const InfluenceNetwork& network) {
  std::vector<int> reached_by(network.node_count(), 0);
  for (int w : network.workers()) {
    std::vector<char> seen(network.node_count(), 0);
    std::vector<int> stack{w};
    seen[w] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e : network.out_edges()[u]) {
        const int v = network.edges()[e].to;
        if (seen[v]) continue;
        seen[v] = 1;
        stack.push_back(v);
      }
    }
    seen[w] = 0;
    for (int v = 0; v < network.node_count(); ++v) reached_by[v] += seen[v];
  }
  int t = 0;
  for (int c : reached_by) t = std::max(t, c);
  return t;
}

SynergyMatrix network_to_synergy(const InfluenceNetwork& network) {
  const int t = sparsity(network);
  if (t > 2) throw PreconditionError("network is " + std::to_string(t) + "-sparse, not 2-sparse");
  const int n = network.worker_count();
  std::vector<int> is_worker(network.node_count(), -1);
  for (int j = 0; j < n; ++j) is_worker[network.workers()[j]] = j;
  for (int j = 0; j < n; ++j) {
    std::vector<char> seen(network.node_count(), 0);
    std::vector<int> stack{network.workers()[j]};
    seen[network.workers()[j]] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e : network.out_edges()[u]) {
        const int v = network.edges()[e].to;
        if (seen[v]) continue;
        seen[v] = 1;
        if (is_worker[v] >= 0) {
          throw PreconditionError("worker " + std::to_string(is_worker[v]) +
                                  " is reachable from worker " + std::to_string(j));
        }
        stack.push_back(v);
      }
    }
  }
  std::vector<Rational> single(n);
  for (int j = 0; j < n; ++j) single[j] = influence_exact(network, WorkerSet{1} << j);
  SynergyMatrix m(n);
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const Rational both = influence_exact(network, (WorkerSet{1} << j) | (WorkerSet{1} << l));
      m.set(j, l, single[j] + single[l] - both);
    }
  }
  for (int j = 0; j < n; ++j) {
    Rational off = 0;
    for (int l = 0; l < n; ++l) {
      if (l != j) off += m(j, l);
    }
    m.set(j, j, single[j] - off);
  }
  return m;
}

InfluenceNetwork synergy_to_network(const SynergyMatrix& matrix) {
  const int n = matrix.size();
  std::vector<int> workers(n);
  for (int j = 0; j < n; ++j) workers[j] = j;
  std::vector<Edge> edges;
  int next = n;
  for (int j = 0; j < n; ++j) {
    for (int l = j; l < n; ++l) {
      const Rational& entry = matrix(j, l);
      if (entry.get_den() != 1) {
        throw PreconditionError("synergy-to-network conversion needs integer entries");
      }
      if (!entry.get_num().fits_slong_p() || entry.get_num() > 1000000) {
        throw GuardError("synergy entry too large to expand into nodes");
      }
      const long count = entry.get_num().get_si();
      for (long c = 0; c < count; ++c) {
        const int node = next++;
        edges.push_back({j, node, Rational(1)});
        if (l != j) edges.push_back({l, node, Rational(1)});
      }
    }
  }
  return InfluenceNetwork(next, std::move(workers), std::move(edges));
}

std::vector<Rational> tabulate(const Valuation& v, const std::vector<int>& weights) {
  int n = static_cast<int>(weights.size());
  if (v.kind() == Valuation::Kind::kExplicit) return v.table();
  if (v.kind() == Valuation::Kind::kSynergy) n = v.matrix().size();
  if (v.kind() == Valuation::Kind::kInfluence) n = v.network().worker_count();
  if (n > kMaxExplicitWorkers) throw GuardError("tabulation limited to 20 workers");
  std::vector<Rational> table(size_t{1} << n);
  for (WorkerSet s = 1; s < table.size(); ++s) table[s] = v.value(s, weights);
  return table;
}

MoebiusTable moebius_decomposition(const std::vector<Rational>& table, int n) {
  if (n > kMaxMoebiusWorkers) throw GuardError("Moebius decomposition limited to 12 workers");
  if (table.size() != (size_t{1} << n)) throw PreconditionError("table must have 2^n entries");
  if (table[0] != 0) throw PreconditionError("v(empty) must be 0");
  const WorkerSet all = full_set(n);
  MoebiusTable out;
  out.n = n;
  // h(U) = v(N) - v(N \ U) is the sum of f over subsets of U.
  out.coefficients.resize(table.size());
  for (WorkerSet u = 0; u <= all; ++u) out.coefficients[u] = table[all] - table[all & ~u];
  for (int i = 0; i < n; ++i) {
    const WorkerSet bit = WorkerSet{1} << i;
    for (WorkerSet u = 0; u <= all; ++u) {
      if (u & bit) out.coefficients[u] -= out.coefficients[u ^ bit];
    }
  }
  out.representable = true;
  for (WorkerSet t = 1; t <= all; ++t) {
    if (out.coefficients[t] < 0) {
      out.representable = false;
      if (!out.witness) out.witness = t;
    }
  }
  return out;
}

Rational moebius_reconstruct(const MoebiusTable& table, WorkerSet s) {
  Rational total = 0;
  for (WorkerSet t = 1; t < table.coefficients.size(); ++t) {
    if (t & s) total += table.coefficients[t];
  }
  return total;
}

CompetitionGame symmetrize(const CompetitionGame& game, const Rational& z_prime) {
  if (game.k() != 2) throw PreconditionError("symmetrization needs exactly two firms");
  const int n = game.n();
  if (n + 2 > kMaxExplicitWorkers) throw GuardError("symmetrization limited to 18 workers");
  std::vector<Rational> v1(size_t{1} << n), v2(size_t{1} << n);
  for (WorkerSet s = 0; s < v1.size(); ++s) {
    v1[s] = game.value(1, s);
    v2[s] = game.value(2, s);
  }
  const Valuation e1 = Valuation::explicit_table(n, v1);
  const Valuation e2 = Valuation::explicit_table(n, v2);
  if (!is_submodular(e1, game.weights()) || !is_submodular(e2, game.weights())) {
    throw PreconditionError("symmetrization needs submodular valuations");
  }
  const WorkerSet all = full_set(n);
  const Rational z = std::max(v1[all], v2[all]);
  if (z_prime <= z) throw PreconditionError("Z' must exceed max{v1(N), v2(N)}");
  const WorkerSet x = WorkerSet{1} << n;
  const WorkerSet y = WorkerSet{1} << (n + 1);
  std::vector<Rational> v(size_t{1} << (n + 2));
  for (WorkerSet s = 0; s <= all; ++s) {
    v[s] = v1[s] + v2[s];
    v[s | x] = v1[s] + z + z_prime;
    v[s | y] = v2[s] + z + z_prime;
    v[s | x | y] = 2 * z + z_prime;
  }
  const Valuation sym = Valuation::explicit_table(n + 2, std::move(v));
  std::vector<int> weights(n + 2, 1);
  if (!is_submodular(sym, weights)) throw Error("symmetrized valuation is not submodular");
  CompetitionGame out(weights, {sym, sym});
  out.metadata["construction"] = "symmetrization of a two-firm submodular game";
  out.metadata["z"] = to_string(z);
  out.metadata["z_prime"] = to_string(z_prime);
  out.metadata["equivalence"] = "has a PSPE iff the source game has a PSPE";
  return out;
}

DsFixtures build_ds_fixtures() {
  auto make = [](std::vector<WorkerSet> special) {
    std::vector<Rational> table(16);
    for (WorkerSet s = 1; s < 16; ++s) {
      const int size = set_size(s);
      if (size == 1) {
        table[s] = 2;
      } else if (size == 2) {
        table[s] = std::find(special.begin(), special.end(), s) != special.end() ? 4 : 3;
      } else {
        table[s] = 4;
      }
    }
    return Valuation::explicit_table(4, std::move(table));
  };
  // Workers 1..4 are bits 0..3.
  DsFixtures f;
  f.v1 = make({0b0101, 0b1010});
  f.v2 = make({0b0011, 0b1100});
  f.z_prime = 5;

  // Pairs of workers sharing one node: a12 a23 a34 a41 and b13 b32 b24 b41.
  const std::vector<std::pair<int, int>> a_pairs{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const std::vector<std::pair<int, int>> b_pairs{{0, 2}, {2, 1}, {1, 3}, {3, 0}};
  auto single = [](const std::vector<std::pair<int, int>>& pairs) {
    std::vector<Edge> edges;
    for (size_t p = 0; p < pairs.size(); ++p) {
      const int node = 4 + static_cast<int>(p);
      edges.push_back({pairs[p].first, node, Rational(1)});
      edges.push_back({pairs[p].second, node, Rational(1)});
    }
    return InfluenceNetwork(8, {0, 1, 2, 3}, std::move(edges));
  };
  f.h1 = single(a_pairs);
  f.h2 = single(b_pairs);
  for (WorkerSet s = 0; s < 16; ++s) {
    if (influence_exact(f.h1, s) != f.v1.value(s, {1, 1, 1, 1}) ||
        influence_exact(f.h2, s) != f.v2.value(s, {1, 1, 1, 1})) {
      throw Error("network realization does not match the valuation");
    }
  }

  // Workers 0..3, x = 4, y = 5; A = 6..9, B = 10..13, C = 14..18.
  std::vector<Edge> edges;
  for (size_t p = 0; p < 4; ++p) {
    const int a = 6 + static_cast<int>(p);
    const int b = 10 + static_cast<int>(p);
    edges.push_back({a_pairs[p].first, a, Rational(1)});
    edges.push_back({a_pairs[p].second, a, Rational(1)});
    edges.push_back({b_pairs[p].first, b, Rational(1)});
    edges.push_back({b_pairs[p].second, b, Rational(1)});
  }
  for (int node = 10; node < 19; ++node) edges.push_back({4, node, Rational(1)});
  for (int node = 6; node < 10; ++node) edges.push_back({5, node, Rational(1)});
  for (int node = 14; node < 19; ++node) edges.push_back({5, node, Rational(1)});
  f.combined = InfluenceNetwork(19, {0, 1, 2, 3, 4, 5}, std::move(edges));
  return f;
}

}  // namespace market_eq
