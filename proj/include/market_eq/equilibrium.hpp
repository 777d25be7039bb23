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

#ifndef MARKET_EQ_EQUILIBRIUM_HPP_
#define MARKET_EQ_EQUILIBRIUM_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "market_eq/game.hpp"
#include "market_eq/lp.hpp"
#include "market_eq/partition_opt.hpp"

namespace market_eq {

enum class Objective { kFeasibility, kMinPay, kMaxPay };

enum class PaymentStructure {
  kPerWorker,     // one variable per worker
  kPerType,       // one variable per worker type
  kProportional,  // x_j = delta * w_j
};

// Firm -1 marks worker IR rows, firm 0 marks idle-worker rows.
struct StabilityRow {
  int firm = 0;
  WorkerSet dismissed = 0;
  WorkerSet recruited = 0;
};

// Rows read  x(A) - x(B) <= v_i(S_i) - v_i((S_i \ A) u B)  with x = P y.
struct StabilityLP {
  int workers = 0;
  PaymentStructure structure = PaymentStructure::kPerWorker;
  Objective objective = Objective::kFeasibility;
  std::vector<std::vector<Rational>> payment_map;  // workers x variables
  std::vector<std::string> variable_names;
  LinearProgram lp;
  std::vector<StabilityRow> tags;

  std::vector<Rational> payments(const std::vector<Rational>& y) const;
  std::string listing() const;
};

struct StabilityOptions {
  bool collapse_types = true;
  Objective objective = Objective::kFeasibility;
  bool proportional = false;
  double row_limit = 4e6;
};

StabilityLP build_stability_lp(const CompetitionGame& game, const Partition& partition,
                               const StabilityOptions& options = {});

struct StabilitySolution {
  bool feasible = false;
  std::vector<Rational> variables;
  std::vector<Rational> payments;
  Rational total_pay;
  std::vector<StabilityRow> conflict;
  std::vector<Rational> conflict_rhs;
};

StabilitySolution solve_stability_lp(const StabilityLP& lp, bool certificate = true);

struct PspeSearch {
  std::optional<Outcome> outcome;
  std::vector<Partition> refuted;  // optimal partitions with infeasible LP
  std::vector<std::vector<StabilityRow>> certificates;
};

// Tries every optimal partition in canonical order.
PspeSearch find_pspe(const CompetitionGame& game, Objective objective = Objective::kFeasibility,
                     const Guards& guards = {}, bool certificates = true);

struct DeviationReport {
  int firm = 0;            // firm with the largest gain, 0 if none
  WorkerSet bundle = 0;    // its best alternative bundle
  Rational gain;           // raw gain of that firm
  Rational normalized;     // max over firms of gain_i / r_i (raw when r_i <= 0)
  bool normalization_fallback = false;
  std::vector<Rational> firm_gains;
};

DeviationReport deviation_gap(const CompetitionGame& game, const Outcome& outcome);

// Demand query for one firm at prices x.
BestResponse firm_best_response(const CompetitionGame& game, int firm,
                                const std::vector<Rational>& prices);

struct TwoFirmConstruction {
  int q1 = 0, q2 = 0;
  int w_light1 = 0, w_light2 = 0;
  Rational y1, y2, z1, z2;
  int d_star1 = 0, d_star2 = 0;
  Rational z_star1, z_star2;
  Rational delta_formula;  // max{z*_1, z*_2}, or v_i(w*)/w* when a part is empty
  Rational delta;          // unit payment actually used
  Rational interval_lo;    // feasible proportional unit payments for the partition
  std::optional<Rational> interval_hi;
  std::string method;      // "empty-part", "slopes", "symmetric-slope", "interval"
  bool formula_verified = false;
};

std::pair<Outcome, TwoFirmConstruction> two_firm_weighted_pspe(const CompetitionGame& game,
                                                              const Guards& guards = {});

// Proportional payments at the marginal unit value of an almost-balanced
// partition; nullopt when no such partition exists.
std::optional<Outcome> balanced_pspe(const CompetitionGame& game, const Guards& guards = {});

struct HomogeneousResult {
  Outcome outcome;
  Rational delta;
  std::vector<int> sizes;
  Rational lower_bound;  // max_i m_i(1, n_i)
  std::optional<Rational> upper_bound;  // min_i m_i(1, n_i - 1)
};

std::optional<HomogeneousResult> homogeneous_min_delta(const CompetitionGame& game,
                                                       const Guards& guards = {});

Outcome synergy_two_firm_pspe(const CompetitionGame& game, const Guards& guards = {});

struct HeuristicPayments {
  std::vector<Rational> payments;
  Rational delta;
  int gap = 0;  // max minus min part weight
};

HeuristicPayments heuristic_payments(const CompetitionGame& game, const Partition& partition);

// v(q) - delta * q with q = floor(W/k) and the heuristic unit payment of the
// canonical optimal partition.
Rational revenue_baseline(const CompetitionGame& game, const Guards& guards = {});

Outcome fairness_transform(const CompetitionGame& game, const Outcome& outcome,
                           const std::vector<std::vector<int>>& types);

struct OutcomeReport {
  bool individually_rational = true;
  std::optional<int> ir_witness;
  bool envy_free = true;
  std::optional<std::pair<int, int>> envy_witness;  // (envious firm, envied firm)
  bool fair = true;                              // same type, same firm, same pay
  std::optional<std::pair<int, int>> fair_witness;
  bool cross_firm_equal = true;                  // same type, any firms, same pay
  std::optional<std::pair<int, int>> cross_firm_witness;
  bool marginal_bounds = true;
  std::optional<int> marginal_witness;
  DeviationReport deviation;

  bool all_pass() const {
    return individually_rational && envy_free && fair && marginal_bounds && deviation.gain == 0;
  }
};

OutcomeReport check_outcome(const CompetitionGame& game, const Outcome& outcome);

}  // namespace market_eq

#endif  // MARKET_EQ_EQUILIBRIUM_HPP_
