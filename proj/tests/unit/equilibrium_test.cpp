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

#include <random>

#include <gtest/gtest.h>

#include "market_eq/equilibrium.hpp"
#include "market_eq/network.hpp"
#include "test_support.hpp"

namespace market_eq {
namespace {

using testing::load_game;
using testing::r;

std::vector<Rational> xs(std::initializer_list<const char*> values) {
  std::vector<Rational> out;
  for (const char* v : values) out.push_back(r(v));
  return out;
}

TEST(NonexistenceTest, NonconcaveThreeWorkers) {
  const auto s = find_pspe(load_game("nonconcave_three_worker.json"));
  EXPECT_FALSE(s.outcome.has_value());
  ASSERT_EQ(s.refuted.size(), 1u);
  EXPECT_FALSE(s.certificates[0].empty());
}

TEST(NonexistenceTest, FourFirmCapped) {
  const auto s = find_pspe(load_game("four_firm_capped.json"));
  EXPECT_FALSE(s.outcome.has_value());
  EXPECT_EQ(s.refuted.size(), 2u);
}

TEST(NonexistenceTest, SquareRootEveryOptimalPartitionRefuted) {
  const auto s = find_pspe(load_game("square_root_three_firm.json"), Objective::kFeasibility, {}, false);
  EXPECT_FALSE(s.outcome.has_value());
  EXPECT_EQ(s.refuted.size(), 4u);
}

TEST(NonexistenceTest, DensePairAndItsSymmetrization) {
  EXPECT_FALSE(find_pspe(load_game("dense_pair_two_firm.json")).outcome.has_value());
  EXPECT_FALSE(find_pspe(load_game("symmetrized_dense_pair.json")).outcome.has_value());
  const auto f = build_ds_fixtures();
  const auto sym = symmetrize(CompetitionGame({1, 1, 1, 1}, {f.v1, f.v2}), f.z_prime);
  EXPECT_FALSE(find_pspe(sym).outcome.has_value());
}

TEST(ProportionalTest, EnvyForcesTwoUnitPrices) {
  const auto game = load_game("no_proportional_three_firm.json");
  StabilityOptions opt;
  opt.proportional = true;
  for (const auto& p : enumerate_optimal_partitions(game)) {
    const auto sol = solve_stability_lp(build_stability_lp(game, p, opt));
    EXPECT_FALSE(sol.feasible);
    EXPECT_FALSE(sol.conflict.empty());
  }
  // Without the proportional restriction an equilibrium exists.
  const auto s = find_pspe(game);
  ASSERT_TRUE(s.outcome.has_value());
  EXPECT_EQ(testing::oracle_gap(game, *s.outcome), 0);
}

TEST(MinPayTest, WeightsOneTwoThreeFive) {
  const auto game = load_game("two_firm_weights_1235.json");
  const auto s = find_pspe(game, Objective::kMinPay);
  ASSERT_TRUE(s.outcome.has_value());
  EXPECT_EQ(s.outcome->payments[0], 1);
  EXPECT_EQ(testing::oracle_gap(game, *s.outcome), 0);
  // Exhaustive oracle over half-integer payments on both optimal partitions.
  Rational best = -1;
  for (const auto& p : enumerate_optimal_partitions(game)) {
    std::vector<int> idx(4, 0);
    while (true) {
      Outcome o{p, {}};
      for (int j = 0; j < 4; ++j) o.payments.push_back(ratio(idx[j], 2));
      if (testing::oracle_gap(game, o) == 0) {
        const Rational t = sum(o.payments);
        if (best < 0 || t < best) best = t;
      }
      int j = 0;
      while (j < 4 && idx[j] == 12) idx[j++] = 0;
      if (j == 4) break;
      ++idx[j];
    }
  }
  EXPECT_EQ(sum(s.outcome->payments), best);
  EXPECT_EQ(best, 5);
  // The undercutting vector (1,2,2,4) is an equilibrium too.
  const Outcome undercut{make_partition({make_set({0, 1, 2}), make_set({3})}, 4), xs({"1", "2", "2", "4"})};
  EXPECT_TRUE(check_outcome(game, undercut).all_pass());
}

TEST(SynergyOutcomeTest, TriangleOneWorkerPerFirm) {
  const auto game = load_game("triangle_synergy.json");
  const auto o = testing::load_outcome("triangle_synergy_outcome.json", game);
  const auto rep = check_outcome(game, o);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_EQ(testing::oracle_gap(game, o), 0);
}

TEST(SynergyOutcomeTest, FiveWorkerCandidateMatchesOracle) {
  const auto game = load_game("five_worker_synergy.json");
  const auto o = testing::load_outcome("five_worker_synergy_outcome.json", game);
  EXPECT_EQ(firm_profits(game, o), (std::vector<Rational>{1, 1, 1}));
  // v({a1,b1}) = 3 + 4 - 1.
  EXPECT_EQ(game.value(1, make_set({0, 2})), 6);
  EXPECT_EQ(deviation_gap(game, o).gain, testing::oracle_gap(game, o));
}

TEST(AsymmetricCapsTest, LpResultMatchesOracle) {
  const auto game = load_game("asymmetric_capped_three_firm.json");
  EXPECT_EQ(optimal_welfare(game), testing::oracle_welfare(game));
  const auto s = find_pspe(game);
  if (s.outcome) {
    EXPECT_EQ(testing::oracle_gap(game, *s.outcome), 0);
  }
}

TEST(SynergyConstructionTest, TwoSparseNetworkPayments) {
  const auto game = load_game("two_sparse_synergy_game.json");
  const auto o = synergy_two_firm_pspe(game);
  EXPECT_EQ(o.payments, xs({"5/2", "2", "7/2"}));
  EXPECT_EQ(testing::oracle_gap(game, o), 0);
  EXPECT_THROW(synergy_two_firm_pspe(load_game("four_firm_capped.json")), PreconditionError);
}

TEST(SynergyConstructionTest, RandomMatricesVerify) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto m = std::make_shared<const SynergyMatrix>(testing::random_synergy(n, 4, rng));
    const CompetitionGame game(std::vector<int>(n, 1), {Valuation::synergy(m), Valuation::synergy(m)});
    const auto o = synergy_two_firm_pspe(game);
    EXPECT_EQ(testing::oracle_gap(game, o), 0) << "trial " << trial;
  }
}

CompetitionGame random_two_firm(std::mt19937_64& rng, bool symmetric) {
  const int n = 1 + static_cast<int>(rng() % 7);
  const auto w = testing::random_weights(n, 1, 5, rng);
  int total = 0;
  for (int x : w) total += x;
  const auto v1 = testing::random_concave(total, rng);
  return CompetitionGame(w, {v1, symmetric ? v1 : testing::random_concave(total, rng)});
}

TEST(TwoFirmConstructionTest, RandomConcaveGamesVerify) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 150; ++trial) {
    const auto game = random_two_firm(rng, trial % 2 == 0);
    const auto [o, c] = two_firm_weighted_pspe(game);
    ASSERT_EQ(testing::oracle_gap(game, o), 0) << "trial " << trial << " method " << c.method;
    EXPECT_EQ(social_welfare(game, o.partition), testing::oracle_welfare(game));
    for (size_t j = 0; j < o.payments.size(); ++j) EXPECT_EQ(o.payments[j], c.delta * game.weights()[j]);
  }
}

TEST(TwoFirmConstructionTest, RejectsNonconcave) {
  EXPECT_THROW(two_firm_weighted_pspe(load_game("nonconcave_three_worker.json")), PreconditionError);
}

TEST(BalancedTest, ProfitEqualsBaseline) {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const int k = 2 + static_cast<int>(rng() % 2);
    const auto w = testing::random_weights(n, 1, 4, rng);
    int total = 0;
    for (int x : w) total += x;
    const CompetitionGame game(w, std::vector<Valuation>(k, testing::random_concave(total, rng)));
    const auto o = balanced_pspe(game);
    if (!o) continue;
    ++checked;
    EXPECT_EQ(testing::oracle_gap(game, *o), 0);
    const Rational r0 = revenue_baseline(game);
    for (const auto& profit : firm_profits(game, *o)) EXPECT_EQ(profit, r0);
  }
  EXPECT_GE(checked, 20);
}

TEST(HomogeneousTest, MinimalUnitPaymentVerifies) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const int k = 2 + static_cast<int>(rng() % 2);
    const CompetitionGame game(std::vector<int>(n, 1), std::vector<Valuation>(k, testing::random_concave(n, rng)));
    const auto res = homogeneous_min_delta(game);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(testing::oracle_gap(game, res->outcome), 0);
    EXPECT_GE(res->delta, res->lower_bound);
    if (res->upper_bound) {
      EXPECT_LE(res->delta, *res->upper_bound);
    }
    // Any smaller common unit payment gives some firm a deviation.
    if (res->delta > 0) {
      Outcome lower = res->outcome;
      for (auto& x : lower.payments) x = res->delta - Rational(1, 1000);
      bool feasible_elsewhere = false;
      for (const auto& p : enumerate_optimal_partitions(game)) {
        lower.partition = p;
        feasible_elsewhere |= testing::oracle_gap(game, lower) == 0;
      }
      EXPECT_FALSE(feasible_elsewhere);
    }
  }
}

TEST(CheckOutcomeTest, ReportsIndividualRationalityFailure) {
  const auto game = load_game("two_firm_weights_1235.json");
  const Outcome o{make_partition({make_set({0, 1, 2}), make_set({3})}, 4), xs({"-1", "2", "3", "5"})};
  const auto rep = check_outcome(game, o);
  EXPECT_FALSE(rep.individually_rational);
  ASSERT_TRUE(rep.ir_witness.has_value());
  EXPECT_EQ(*rep.ir_witness, 0);
  EXPECT_FALSE(rep.all_pass());
}

TEST(CheckOutcomeTest, ReportsEnvyAndUnfairness) {
  const auto game = load_game("four_firm_capped.json");
  Outcome o{make_partition({make_set({0, 1, 2}), make_set({3, 4, 5}), make_set({6, 7}), make_set({8})}, 9), {}};
  o.payments = xs({"1", "2", "1", "1", "1", "1", "1", "1", "1"});
  const auto rep = check_outcome(game, o);
  EXPECT_FALSE(rep.fair);
  EXPECT_FALSE(rep.envy_free);
  EXPECT_GT(rep.deviation.gain, 0);
  EXPECT_EQ(rep.deviation.gain, testing::oracle_gap(game, o));
}

TEST(DeviationGapTest, MatchesOracleOnRandomOutcomes) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto w = testing::random_weights(n, 1, 4, rng);
    int total = 0;
    for (int x : w) total += x;
    const CompetitionGame game(w, {testing::random_monotone(total, rng), testing::random_concave(total, rng)});
    Outcome o;
    o.partition.k = 2;
    for (int j = 0; j < n; ++j) {
      o.partition.assignment.push_back(static_cast<int>(rng() % 3));
      o.payments.push_back(testing::random_unit(rng, 4));
    }
    const auto d = deviation_gap(game, o);
    ASSERT_EQ(d.gain, testing::oracle_gap(game, o)) << "trial " << trial;
  }
}

TEST(StabilityLpTest, CollapsedAndFullLpsAgree) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const auto w = testing::random_weights(n, 1, 3, rng);
    int total = 0;
    for (int x : w) total += x;
    const auto v = rng() % 3 ? testing::random_concave(total, rng) : testing::random_monotone(total, rng);
    const CompetitionGame game(w, std::vector<Valuation>(2 + static_cast<int>(rng() % 2), v));
    const Partition p = optimal_partition(game);
    StabilityOptions full;
    full.collapse_types = false;
    const auto a = solve_stability_lp(build_stability_lp(game, p));
    const auto b = solve_stability_lp(build_stability_lp(game, p, full));
    ASSERT_EQ(a.feasible, b.feasible) << "trial " << trial;
    if (a.feasible) {
      EXPECT_EQ(testing::oracle_gap(game, Outcome{p, a.payments}), 0);
      EXPECT_EQ(testing::oracle_gap(game, Outcome{p, b.payments}), 0);
    }
  }
}

TEST(StabilityLpTest, PayObjectivesBracketFeasiblePayments) {
  const auto game = load_game("two_firm_weights_1235.json");
  const Partition p = optimal_partition(game);
  StabilityOptions opt;
  opt.objective = Objective::kMinPay;
  const auto lo = solve_stability_lp(build_stability_lp(game, p, opt));
  opt.objective = Objective::kMaxPay;
  const auto hi = solve_stability_lp(build_stability_lp(game, p, opt));
  ASSERT_TRUE(lo.feasible && hi.feasible);
  EXPECT_LE(lo.total_pay, hi.total_pay);
  EXPECT_EQ(testing::oracle_gap(game, Outcome{p, hi.payments}), 0);
  EXPECT_FALSE(build_stability_lp(game, p).listing().empty());
}

TEST(HeuristicTest, SecantUnitPayment) {
  const auto game = load_game("four_firm_capped.json");
  const auto p = optimal_partition(game);
  const auto h = heuristic_payments(game, p);
  EXPECT_EQ(h.gap, 2);
  // (v(7) - v(5)) / 2 with v = min(w, 6).
  EXPECT_EQ(h.delta, Rational(1, 2));
}

TEST(FairnessTest, AveragingKeepsEquilibrium) {
  const auto game = load_game("two_firm_weights_1235.json");
  const auto s = find_pspe(game, Objective::kMaxPay);
  ASSERT_TRUE(s.outcome.has_value());
  const auto fair = fairness_transform(game, *s.outcome, worker_types(game));
  EXPECT_TRUE(check_outcome(game, fair).fair);
  EXPECT_EQ(testing::oracle_gap(game, fair), 0);
}

}  // namespace
}  // namespace market_eq
