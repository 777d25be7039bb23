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

#ifndef MARKET_EQ_LP_HPP_
#define MARKET_EQ_LP_HPP_

#include <vector>

#include "market_eq/rational.hpp"

namespace market_eq {

// maximize objective . y  subject to  rows[r] . y <= rhs[r],  y >= 0.
// An empty objective means pure feasibility.
struct LinearProgram {
  int variables = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;

  void add_row(std::vector<Rational> coefficients, Rational bound);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpOptions {
  // Start from rows with at most one nonzero and add violated rows in
  // batches until the full system holds.
  bool lazy_rows = false;
  int batch_size = 64;
  // Greedy deletion over the infeasible row set.
  bool certificate = false;
  int certificate_row_limit = 400;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> solution;
  Rational objective_value;
  std::vector<int> conflict;  // row indices, irreducible when present
  int pivots = 0;
  int rounds = 0;
};

// Exact dictionary simplex with Bland's rule and an auxiliary phase one.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace market_eq

#endif  // MARKET_EQ_LP_HPP_
