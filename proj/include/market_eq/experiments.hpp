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

#ifndef MARKET_EQ_EXPERIMENTS_HPP_
#define MARKET_EQ_EXPERIMENTS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "market_eq/game.hpp"
#include "market_eq/partition_opt.hpp"

namespace market_eq {

enum class DatasetKind { kD1, kD2, kD3 };
enum class ValuationMode { kRandomConcave, kPowerAlpha, kRandomUnconstrained };

struct GeneratorSpec {
  DatasetKind kind = DatasetKind::kD1;
  int count = 0;
  int min_workers = 5, max_workers = 14;
  int min_types = 2, max_types = 4;  // D1 only
  int min_weight = 2, max_weight = 15;
  int weight_cap = 80;  // total weight strictly below; 0 means no cap
  int firms = 3;
  ValuationMode mode = ValuationMode::kRandomConcave;
  std::vector<double> alphas;  // D3
  std::uint64_t seed = 1;

  static GeneratorSpec d1(int count, std::uint64_t seed);
  static GeneratorSpec d2(int count, std::uint64_t seed);
  static GeneratorSpec d3(int count, std::uint64_t seed);
  void validate() const;
};

std::uint64_t instance_seed(std::uint64_t master, std::uint64_t index);

// Uniform increments on [0,1] with denominator 2^53.
Valuation gen_random_concave_value(int total_weight, std::mt19937_64& rng);
Valuation gen_random_unconstrained_value(int total_weight, std::mt19937_64& rng);
// w^alpha with values rounded to denominator 10^6.
Valuation power_value(int total_weight, double alpha);

struct Instance {
  int id = 0;
  CompetitionGame game;
  std::optional<double> alpha;
};

std::vector<Instance> generate_dataset(const GeneratorSpec& spec);

struct ExperimentRecord {
  int id = 0;
  int n = 0;
  int types = 0;
  int total_weight = 0;
  std::vector<int> profile;
  int gap = 0;
  bool almost_balanced = false;
  Rational delta;
  Rational h;  // normalized deviation gain of the heuristic payments
  bool h_fallback = false;
  bool pspe = false;  // canonical partition's LP is feasible
  std::optional<bool> strict_pspe;
  std::optional<Rational> revenue_min;
  std::optional<Rational> revenue_max;
  Rational r0;
  std::optional<double> alpha;
  std::string error;
};

struct StudyOptions {
  bool stability = true;
  bool revenue = false;
  bool strict_census = false;
  int threads = 1;
  Guards guards;
};

std::vector<ExperimentRecord> run_study(const std::vector<Instance>& instances,
                                        const StudyOptions& options);

struct StudySummary {
  int instances = 0;
  int errors = 0;
  double almost_balanced = 0;
  double h_zero = 0;
  double h_small = 0;  // h <= 0.05
  int pspe_found = 0;
  int lp_infeasible = 0;
  int strict_pspe_found = 0;
  double stable_fraction = 0;
  int revenue_records = 0;
  double r0_in_range = 0;
};

StudySummary summarize(const std::vector<ExperimentRecord>& records);

// CSV text; rows sorted by id.
std::string stability_csv(const std::vector<ExperimentRecord>& records);
std::string survival_csv(const std::vector<ExperimentRecord>& records);
std::string revenue_csv(const std::vector<ExperimentRecord>& records);

}  // namespace market_eq

#endif  // MARKET_EQ_EXPERIMENTS_HPP_
