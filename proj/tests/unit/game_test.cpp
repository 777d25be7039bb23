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

#include "market_eq/game.hpp"
#include "market_eq/network.hpp"
#include "test_support.hpp"

namespace market_eq {
namespace {

using testing::r;

Valuation capped(int cap, int total) {
  std::vector<Rational> v;
  for (int t = 0; t <= total; ++t) v.push_back(std::min(t, cap));
  return Valuation::weighted(v);
}

std::vector<Rational> prices(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(r(x));
  return out;
}

TEST(ValuationTest, WeightedAndExplicitEvaluate) {
  const auto v = Valuation::weighted({0, 3, 4, 6});
  EXPECT_EQ(v.value(make_set({0, 2}), {1, 1, 1}), 4);
  EXPECT_EQ(marginal(v, 1, make_set({0}), {1, 1, 1}), 1);
  const auto f = build_ds_fixtures();
  EXPECT_EQ(f.v1.value(make_set({0, 2}), {1, 1, 1, 1}), 4);
  EXPECT_EQ(f.v1.value(make_set({0, 1}), {1, 1, 1, 1}), 3);
}

TEST(ValuationTest, RejectsNonMonotoneOrNonZeroEmpty) {
  EXPECT_THROW(Valuation::weighted({1, 2}), PreconditionError);
  EXPECT_THROW(Valuation::weighted({0, 2, 1}), PreconditionError);
  EXPECT_THROW(Valuation::explicit_table(1, {0, -1}), PreconditionError);
}

TEST(ValuationTest, ConcavityAndSubadditivityAreDistinct) {
  const auto v = Valuation::weighted({0, 3, 4, 6});
  EXPECT_FALSE(is_concave_weighted(v));
  EXPECT_TRUE(is_subadditive(v, {1, 1, 1}));
  EXPECT_FALSE(is_submodular(v, {1, 1, 1}));
  EXPECT_TRUE(is_concave_weighted(capped(6, 12)));
  EXPECT_TRUE(is_submodular(build_ds_fixtures().v1, {1, 1, 1, 1}));
  EXPECT_TRUE(is_monotone(build_ds_fixtures().v2, {1, 1, 1, 1}));
}

TEST(SynergyTest, ValueMatchesEdgeCountOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const auto m = testing::random_synergy(n, 4, rng);
    for (WorkerSet s = 0; s < (WorkerSet{1} << n); ++s) {
      ASSERT_EQ(synergy_value(m, s), testing::oracle_synergy(m, s));
    }
  }
}

TEST(DemandTest, TwoMaximizersAtHalfWeightPrices) {
  const std::vector<int> w{3, 3, 2, 2, 2};
  const auto v = capped(6, 12);
  const auto d = demand_set(v, prices({"3/2", "3/2", "1", "1", "1"}), w);
  EXPECT_EQ(d.profit, 3);
  EXPECT_EQ(d.maximizers, (std::vector<WorkerSet>{make_set({0, 1}), make_set({2, 3, 4})}));
  const auto raised = demand_set(v, prices({"2", "3/2", "1", "1", "1"}), w);
  EXPECT_EQ(raised.maximizers, (std::vector<WorkerSet>{make_set({2, 3, 4})}));
}

TEST(DemandTest, WeightedBestResponseMatchesEnumeration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto w = testing::random_weights(n, 1, 6, rng);
    int total = 0;
    for (int x : w) total += x;
    const auto v = rng() % 2 ? testing::random_concave(total, rng) : testing::random_monotone(total, rng);
    std::vector<Rational> x;
    for (int j = 0; j < n; ++j) x.push_back(testing::random_unit(rng, 8) * w[j]);
    Rational best = 0;
    for (WorkerSet s = 0; s < (WorkerSet{1} << n); ++s) {
      best = std::max(best, Rational(v.value(s, w) - payment_total(x, s)));
    }
    const auto br = best_response(v, x, w);
    ASSERT_EQ(br.profit, best) << "trial " << trial;
    EXPECT_EQ(v.value(br.bundle, w) - payment_total(x, br.bundle), best);
    EXPECT_EQ(demand_set(v, x, w).profit, best);
  }
}

TEST(GrossSubstitutesTest, RaisingHeavyPriceDropsUnchangedHeavyWorker) {
  const std::vector<int> w{3, 3, 2, 2, 2};
  const auto v = capped(6, 12);
  const auto x = prices({"3/2", "3/2", "1", "1", "1"});
  const auto witness = gs_violation(v, x, prices({"2", "3/2", "1", "1", "1"}), w);
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(*witness, 1);
  EXPECT_EQ(w[*witness], 3);
}

TEST(GrossSubstitutesTest, RaisingLightPriceDropsUnchangedLightWorker) {
  const std::vector<int> w{3, 3, 2, 2, 2};
  const auto witness = gs_violation(capped(6, 12), prices({"3/2", "3/2", "1", "1", "1"}),
                                    prices({"3/2", "3/2", "3/2", "1", "1"}), w);
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(w[*witness], 2);
}

TEST(GrossSubstitutesTest, DensePairValuationViolates) {
  const auto f = build_ds_fixtures();
  const auto witness = gs_violation(f.v1, prices({"1", "1", "1", "1"}), prices({"2", "1", "1", "1"}), {1, 1, 1, 1});
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(*witness, 2);
}

TEST(GrossSubstitutesTest, SweepFindsWitnessOnlyWhenOneExists) {
  EXPECT_TRUE(gs_sweep(capped(6, 12), {3, 3, 2, 2, 2}).has_value());
  // Unit weights with concave values are gross substitutes.
  EXPECT_FALSE(gs_sweep(Valuation::weighted({0, 5, 8, 9, 9}), {1, 1, 1, 1}).has_value());
  const auto found = gs_sweep(build_ds_fixtures().v1, {1, 1, 1, 1});
  ASSERT_TRUE(found.has_value());
  EXPECT_TRUE(gs_violation(build_ds_fixtures().v1, found->x, found->x_raised, {1, 1, 1, 1}).has_value());
}

TEST(WorkerTypesTest, WeightClassesForWeightedGames) {
  const auto game = testing::load_game("four_firm_capped.json");
  const auto types = worker_types(game);
  ASSERT_EQ(types.size(), 3u);
  EXPECT_EQ(types[0], (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(type_index(types, 9)[8], 2);
}

TEST(WorkerTypesTest, DefinitionCheckSplitsAcrossFirms) {
  const auto f = build_ds_fixtures();
  const CompetitionGame one({1, 1, 1, 1}, {f.v1, f.v1});
  const auto t1 = worker_types(one);
  // Swapping workers 0 and 2 preserves firm 1's special pairs.
  bool together = false;
  for (const auto& t : t1) together |= t == std::vector<int>{0, 2};
  EXPECT_TRUE(together);
  const CompetitionGame both({1, 1, 1, 1}, {f.v1, f.v2});
  EXPECT_EQ(worker_types(both).size(), 4u);
}

TEST(GameTest, ProfitsAndWelfare) {
  const auto game = testing::load_game("triangle_synergy.json");
  const auto o = testing::load_outcome("triangle_synergy_outcome.json", game);
  EXPECT_EQ(firm_profits(game, o), (std::vector<Rational>{1, 1, 1}));
  EXPECT_EQ(social_welfare(game, o.partition), 12);
  EXPECT_TRUE(game.is_symmetric());
  EXPECT_FALSE(game.all_weighted());
}

TEST(GameTest, NeedsTwoFirmsUnlessAllowed) {
  EXPECT_THROW(CompetitionGame({1}, {Valuation::weighted({0, 1})}), PreconditionError);
  EXPECT_NO_THROW(CompetitionGame({1}, {Valuation::weighted({0, 1})}, true));
}

}  // namespace
}  // namespace market_eq
