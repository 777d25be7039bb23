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

#ifndef MARKET_EQ_NETWORK_TYPES_HPP_
#define MARKET_EQ_NETWORK_TYPES_HPP_

#include <vector>

#include "market_eq/rational.hpp"

namespace market_eq {

// Symmetric non-negative matrix over workers. The diagonal holds self-edges.
class SynergyMatrix {
 public:
  SynergyMatrix() = default;
  explicit SynergyMatrix(int n);
  // Row-major entries; throws if not symmetric or negative.
  SynergyMatrix(int n, std::vector<Rational> entries);

  int size() const { return n_; }
  const Rational& operator()(int i, int j) const { return entries_[i * n_ + j]; }
  // Sets both (i,j) and (j,i).
  void set(int i, int j, const Rational& value);
  const std::vector<Rational>& entries() const { return entries_; }
  Rational row_sum(int i) const;

  bool operator==(const SynergyMatrix& other) const {
    return n_ == other.n_ && entries_ == other.entries_;
  }

 private:
  int n_ = 0;
  std::vector<Rational> entries_;
};

struct Edge {
  int from = 0;
  int to = 0;
  Rational probability = 1;

  bool operator==(const Edge& other) const {
    return from == other.from && to == other.to && probability == other.probability;
  }
};

// Directed network with independent-cascade edge probabilities in (0,1].
class InfluenceNetwork {
 public:
  InfluenceNetwork() = default;
  InfluenceNetwork(int nodes, std::vector<int> workers, std::vector<Edge> edges);

  int node_count() const { return nodes_; }
  int worker_count() const { return static_cast<int>(workers_.size()); }
  const std::vector<int>& workers() const { return workers_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Outgoing edge indices per node.
  const std::vector<std::vector<int>>& out_edges() const { return out_; }
  bool deterministic() const;

  bool operator==(const InfluenceNetwork& other) const {
    return nodes_ == other.nodes_ && workers_ == other.workers_ && edges_ == other.edges_;
  }

 private:
  int nodes_ = 0;
  std::vector<int> workers_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
};

}  // namespace market_eq

#endif  // MARKET_EQ_NETWORK_TYPES_HPP_
