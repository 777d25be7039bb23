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

#include "market_eq/lp.hpp"
#include "market_eq/rational.hpp"

namespace market_eq {
namespace {

TEST(RationalTest, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("5/2"), Rational(5, 2));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_EQ(parse_rational(" 4/6 "), Rational(2, 3));
}

TEST(RationalTest, RejectsMalformed) {
  EXPECT_THROW(parse_rational("1/0"), PreconditionError);
  EXPECT_THROW(parse_rational("abc"), PreconditionError);
  EXPECT_THROW(parse_rational(""), PreconditionError);
}

TEST(RationalTest, Formatting) {
  EXPECT_EQ(to_string(Rational(47, 46)), "47/46");
  EXPECT_EQ(to_string(ratio(4, 2)), "2");
  EXPECT_EQ(to_decimal(Rational(1, 3), 4), "0.3333");
  EXPECT_EQ(rationalize(0.5), Rational(1, 2));
  EXPECT_EQ(sum({Rational(1, 2), Rational(1, 3)}), Rational(5, 6));
}

LinearProgram make_lp(int vars, std::vector<std::vector<int>> rows, std::vector<int> rhs,
                      std::vector<int> objective = {}) {
  LinearProgram lp;
  lp.variables = vars;
  for (size_t r = 0; r < rows.size(); ++r) {
    std::vector<Rational> row(rows[r].begin(), rows[r].end());
    lp.add_row(row, rhs[r]);
  }
  for (int c : objective) lp.objective.push_back(c);
  return lp;
}

TEST(LpTest, SolvesTextbookMaximization) {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3.
  const auto lp = make_lp(2, {{1, 1}, {1, 3}, {1, 0}}, {4, 6, 3}, {3, 2});
  const auto res = solve_lp(lp);
  ASSERT_EQ(res.status, LpStatus::kOptimal);
  EXPECT_EQ(res.objective_value, 11);
  EXPECT_EQ(res.solution[0], 3);
  EXPECT_EQ(res.solution[1], 1);
}

TEST(LpTest, FractionalOptimumIsExact) {
  // max x + y s.t. 3x + y <= 2, x + 3y <= 2 -> x = y = 1/2.
  const auto res = solve_lp(make_lp(2, {{3, 1}, {1, 3}}, {2, 2}, {1, 1}));
  ASSERT_EQ(res.status, LpStatus::kOptimal);
  EXPECT_EQ(res.solution[0], Rational(1, 2));
  EXPECT_EQ(res.objective_value, 1);
}

TEST(LpTest, NegativeRightHandSideNeedsPhaseOne) {
  // x >= 2 written as -x <= -2; minimise x via max -x.
  const auto res = solve_lp(make_lp(1, {{-1}, {1}}, {-2, 5}, {-1}));
  ASSERT_EQ(res.status, LpStatus::kOptimal);
  EXPECT_EQ(res.solution[0], 2);
}

TEST(LpTest, DetectsUnbounded) {
  EXPECT_EQ(solve_lp(make_lp(2, {{1, -1}}, {1}, {1, 1})).status, LpStatus::kUnbounded);
}

TEST(LpTest, InfeasibleCertificateIsIrreducible) {
  // x <= 1, -x <= -3 conflict; y <= 5 is irrelevant.
  LpOptions opt;
  opt.certificate = true;
  const auto lp = make_lp(2, {{0, 1}, {1, 0}, {-1, 0}}, {5, 1, -3});
  const auto res = solve_lp(lp, opt);
  ASSERT_EQ(res.status, LpStatus::kInfeasible);
  EXPECT_EQ(res.conflict, (std::vector<int>{1, 2}));
  // Dropping any certificate row makes the rest feasible.
  for (size_t drop = 0; drop < res.conflict.size(); ++drop) {
    LinearProgram sub;
    sub.variables = 2;
    for (size_t c = 0; c < res.conflict.size(); ++c) {
      if (c != drop) sub.add_row(lp.rows[res.conflict[c]], lp.rhs[res.conflict[c]]);
    }
    EXPECT_EQ(solve_lp(sub).status, LpStatus::kOptimal);
  }
}

// Oracle: two-variable LPs are solved by checking every vertex formed by two
// tight constraints (including the axes).
TEST(LpTest, MatchesVertexEnumerationOnRandomTwoVariablePrograms) {
  std::mt19937_64 rng(7);
  auto coef = [&] { return static_cast<int>(rng() % 11) - 5; };
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    LinearProgram lp;
    lp.variables = 2;
    for (int r = 0; r < m; ++r) lp.add_row({Rational(coef()), Rational(coef())}, Rational(coef() + 3));
    lp.add_row({Rational(1), Rational(0)}, Rational(10));
    lp.add_row({Rational(0), Rational(1)}, Rational(10));
    lp.objective = {Rational(coef()), Rational(coef())};

    std::vector<std::vector<Rational>> a = lp.rows;
    std::vector<Rational> b = lp.rhs;
    a.push_back({Rational(-1), Rational(0)});
    b.push_back(0);
    a.push_back({Rational(0), Rational(-1)});
    b.push_back(0);
    bool any = false;
    Rational best;
    for (size_t i = 0; i < a.size(); ++i) {
      for (size_t j = i + 1; j < a.size(); ++j) {
        const Rational det = a[i][0] * a[j][1] - a[i][1] * a[j][0];
        if (det == 0) continue;
        const Rational x = (b[i] * a[j][1] - a[i][1] * b[j]) / det;
        const Rational y = (a[i][0] * b[j] - b[i] * a[j][0]) / det;
        bool ok = true;
        for (size_t r = 0; r < a.size() && ok; ++r) ok = a[r][0] * x + a[r][1] * y <= b[r];
        if (!ok) continue;
        const Rational val = lp.objective[0] * x + lp.objective[1] * y;
        if (!any || val > best) best = val;
        any = true;
      }
    }
    for (bool lazy : {false, true}) {
      LpOptions opt;
      opt.lazy_rows = lazy;
      opt.batch_size = 1;
      const auto res = solve_lp(lp, opt);
      if (!any) {
        EXPECT_EQ(res.status, LpStatus::kInfeasible) << "trial " << trial;
      } else {
        ASSERT_EQ(res.status, LpStatus::kOptimal) << "trial " << trial;
        EXPECT_EQ(res.objective_value, best) << "trial " << trial;
      }
    }
  }
}

TEST(LpTest, LazyRowsAgreeWithFullSystem) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    LinearProgram lp;
    lp.variables = 4;
    for (int r = 0; r < 40; ++r) {
      std::vector<Rational> row;
      for (int v = 0; v < 4; ++v) row.push_back(static_cast<int>(rng() % 7) - 2);
      lp.add_row(row, static_cast<int>(rng() % 9) - 1);
    }
    for (int v = 0; v < 4; ++v) lp.objective.push_back(static_cast<int>(rng() % 5) - 1);
    LpOptions lazy;
    lazy.lazy_rows = true;
    lazy.batch_size = 3;
    const auto full = solve_lp(lp);
    const auto part = solve_lp(lp, lazy);
    ASSERT_EQ(full.status, part.status) << "trial " << trial;
    if (full.status == LpStatus::kOptimal) {
      EXPECT_EQ(full.objective_value, part.objective_value);
    }
  }
}

}  // namespace
}  // namespace market_eq
