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

#include "market_eq/lp.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace market_eq {

void LinearProgram::add_row(std::vector<Rational> coefficients, Rational bound) {
  if (static_cast<int>(coefficients.size()) != variables) {
    throw PreconditionError("row width does not match variable count");
  }
  rows.push_back(std::move(coefficients));
  rhs.push_back(std::move(bound));
}

namespace {

// x_basic[r] = beta[r] + sum_c table[r][c] * x_nonbasic[c]
// z = z0 + sum_c cost[c] * x_nonbasic[c]
class Dictionary {
 public:
  Dictionary(const LinearProgram& lp, const std::vector<int>& active)
      : m_(static_cast<int>(active.size())), nv_(lp.variables) {
    basic_.resize(m_);
    nonbasic_.resize(nv_);
    std::iota(nonbasic_.begin(), nonbasic_.end(), 0);
    beta_.resize(m_);
    table_.assign(m_, std::vector<Rational>(nv_));
    for (int r = 0; r < m_; ++r) {
      basic_[r] = nv_ + r;
      beta_[r] = lp.rhs[active[r]];
      const auto& row = lp.rows[active[r]];
      for (int c = 0; c < nv_; ++c) {
        if (row[c] != 0) table_[r][c] = -row[c];
      }
    }
  }

  // Returns false if infeasible.
  bool phase_one(int& pivots) {
    int worst = -1;
    for (int r = 0; r < m_; ++r) {
      if (beta_[r] < 0 && (worst < 0 || beta_[r] < beta_[worst])) worst = r;
    }
    if (worst < 0) return true;
    const int artificial = nv_ + m_;
    nonbasic_.push_back(artificial);
    for (auto& row : table_) row.emplace_back(1);
    const int col = static_cast<int>(nonbasic_.size()) - 1;
    cost_.assign(nonbasic_.size(), Rational(0));
    cost_[col] = -1;
    z0_ = 0;
    pivot(worst, col);
    ++pivots;
    iterate(pivots);
    if (z0_ < 0) return false;
    // Drive the artificial variable out of the basis if it is still there.
    for (int r = 0; r < m_; ++r) {
      if (basic_[r] != artificial) continue;
      for (size_t c = 0; c < nonbasic_.size(); ++c) {
        if (table_[r][c] != 0) {
          pivot(r, static_cast<int>(c));
          ++pivots;
          break;
        }
      }
      break;
    }
    for (size_t c = 0; c < nonbasic_.size(); ++c) {
      if (nonbasic_[c] != artificial) continue;
      nonbasic_.erase(nonbasic_.begin() + c);
      for (auto& row : table_) row.erase(row.begin() + c);
      break;
    }
    return true;
  }

  // Returns false if unbounded.
  bool optimize(const std::vector<Rational>& objective, int& pivots) {
    cost_.assign(nonbasic_.size(), Rational(0));
    z0_ = 0;
    if (objective.empty()) return true;
    for (size_t c = 0; c < nonbasic_.size(); ++c) {
      if (nonbasic_[c] < nv_) cost_[c] += objective[nonbasic_[c]];
    }
    for (int r = 0; r < m_; ++r) {
      if (basic_[r] >= nv_) continue;
      const Rational& coef = objective[basic_[r]];
      if (coef == 0) continue;
      z0_ += coef * beta_[r];
      for (size_t c = 0; c < nonbasic_.size(); ++c) {
        if (table_[r][c] != 0) cost_[c] += coef * table_[r][c];
      }
    }
    return iterate(pivots);
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> y(nv_);
    for (int r = 0; r < m_; ++r) {
      if (basic_[r] < nv_) y[basic_[r]] = beta_[r];
    }
    return y;
  }

  const Rational& value() const { return z0_; }

 private:
  bool iterate(int& pivots) {
    for (;;) {
      int enter = -1;
      for (size_t c = 0; c < nonbasic_.size(); ++c) {
        if (cost_[c] > 0 && (enter < 0 || nonbasic_[c] < nonbasic_[enter])) {
          enter = static_cast<int>(c);
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int r = 0; r < m_; ++r) {
        const Rational& t = table_[r][enter];
        if (t >= 0) continue;
        Rational ratio = beta_[r] / -t;
        if (leave < 0 || ratio < best || (ratio == best && basic_[r] < basic_[leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(int r, int c) {
    const int width = static_cast<int>(nonbasic_.size());
    std::vector<Rational>& row = table_[r];
    const Rational a = row[c];
    // Solve row r for the entering variable.
    beta_[r] = -beta_[r] / a;
    for (int j = 0; j < width; ++j) {
      if (j == c) {
        row[j] = 1 / a;
      } else if (row[j] != 0) {
        row[j] = -row[j] / a;
      }
    }
    for (int r2 = 0; r2 < m_; ++r2) {
      if (r2 == r) continue;
      std::vector<Rational>& other = table_[r2];
      if (other[c] == 0) continue;
      const Rational t = other[c];
      beta_[r2] += t * beta_[r];
      for (int j = 0; j < width; ++j) {
        if (j == c) {
          other[j] = t * row[j];
        } else if (row[j] != 0) {
          other[j] += t * row[j];
        }
      }
    }
    if (cost_.size() == static_cast<size_t>(width) && cost_[c] != 0) {
      const Rational t = cost_[c];
      z0_ += t * beta_[r];
      for (int j = 0; j < width; ++j) {
        if (j == c) {
          cost_[j] = t * row[j];
        } else if (row[j] != 0) {
          cost_[j] += t * row[j];
        }
      }
    }
    std::swap(basic_[r], nonbasic_[c]);
  }

  int m_;
  int nv_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
  std::vector<Rational> beta_;
  std::vector<std::vector<Rational>> table_;
  std::vector<Rational> cost_;
  Rational z0_;
};

LpResult solve_active(const LinearProgram& lp, const std::vector<int>& active) {
  LpResult result;
  Dictionary dict(lp, active);
  if (!dict.phase_one(result.pivots)) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  if (!dict.optimize(lp.objective, result.pivots)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.solution = dict.solution();
  result.objective_value = dict.value();
  return result;
}

bool feasible_subset(const LinearProgram& lp, const std::vector<int>& active) {
  int pivots = 0;
  Dictionary dict(lp, active);
  return dict.phase_one(pivots);
}

std::vector<int> greedy_conflict(const LinearProgram& lp, std::vector<int> rows) {
  for (size_t i = 0; i < rows.size();) {
    std::vector<int> trial = rows;
    trial.erase(trial.begin() + i);
    if (!feasible_subset(lp, trial)) {
      rows = std::move(trial);
    } else {
      ++i;
    }
  }
  return rows;
}

Rational row_slack(const LinearProgram& lp, int r, const std::vector<Rational>& y) {
  Rational lhs = 0;
  const auto& row = lp.rows[r];
  for (int c = 0; c < lp.variables; ++c) {
    if (row[c] != 0) lhs += row[c] * y[c];
  }
  return lp.rhs[r] - lhs;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
  if (lp.rows.size() != lp.rhs.size()) throw PreconditionError("row/rhs size mismatch");
  if (!lp.objective.empty() && static_cast<int>(lp.objective.size()) != lp.variables) {
    throw PreconditionError("objective width does not match variable count");
  }
  const int m = static_cast<int>(lp.rows.size());
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);

  std::vector<int> active;
  std::vector<char> in_active(m, 0);
  if (options.lazy_rows) {
    for (int r = 0; r < m; ++r) {
      int nonzero = 0;
      for (const auto& a : lp.rows[r]) nonzero += a != 0;
      if (nonzero <= 1) {
        active.push_back(r);
        in_active[r] = 1;
      }
    }
  } else {
    active = all;
    std::fill(in_active.begin(), in_active.end(), 1);
  }

  int total_pivots = 0;
  int rounds = 0;
  for (;;) {
    ++rounds;
    LpResult result = solve_active(lp, active);
    total_pivots += result.pivots;
    if (result.status == LpStatus::kUnbounded &&
        static_cast<int>(active.size()) < m) {
      active = all;
      std::fill(in_active.begin(), in_active.end(), 1);
      continue;
    }
    if (result.status == LpStatus::kInfeasible) {
      if (options.certificate &&
          static_cast<int>(active.size()) <= options.certificate_row_limit) {
        result.conflict = greedy_conflict(lp, active);
      }
      result.pivots = total_pivots;
      result.rounds = rounds;
      return result;
    }
    if (result.status == LpStatus::kUnbounded) {
      result.pivots = total_pivots;
      result.rounds = rounds;
      return result;
    }
    std::vector<std::pair<Rational, int>> violated;
    for (int r = 0; r < m; ++r) {
      if (in_active[r]) continue;
      Rational slack = row_slack(lp, r, result.solution);
      if (slack < 0) violated.emplace_back(std::move(slack), r);
    }
    if (violated.empty()) {
      result.pivots = total_pivots;
      result.rounds = rounds;
      return result;
    }
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    const size_t take = std::min<size_t>(violated.size(), options.batch_size);
    for (size_t i = 0; i < take; ++i) {
      active.push_back(violated[i].second);
      in_active[violated[i].second] = 1;
    }
    std::sort(active.begin(), active.end());
  }
}

}  // namespace market_eq
