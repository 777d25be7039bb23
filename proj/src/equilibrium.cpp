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

#include "market_eq/equilibrium.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "market_eq/network.hpp"

namespace market_eq {

namespace {

std::string set_string(WorkerSet s) {
  std::string out = "{";
  bool first = true;
  for (int j : members(s)) {
    if (!first) out += ",";
    out += std::to_string(j);
    first = false;
  }
  return out + "}";
}

// Worker classes used to enumerate rows: worker types, split further by
// weight when payments are proportional.
std::vector<std::vector<int>> row_classes(const CompetitionGame& game, bool collapse,
                                          bool proportional) {
  const int n = game.n();
  if (!collapse) {
    std::vector<std::vector<int>> singles;
    for (int j = 0; j < n; ++j) singles.push_back({j});
    return singles;
  }
  auto types = worker_types(game);
  if (!proportional) return types;
  std::vector<std::vector<int>> refined;
  for (const auto& cls : types) {
    std::map<int, std::vector<int>> by_weight;
    for (int j : cls) by_weight[game.weights()[j]].push_back(j);
    for (auto& [w, group] : by_weight) refined.push_back(std::move(group));
  }
  std::sort(refined.begin(), refined.end());
  return refined;
}

}  // namespace

std::vector<Rational> StabilityLP::payments(const std::vector<Rational>& y) const {
  std::vector<Rational> x(workers);
  for (int j = 0; j < workers; ++j) {
    for (size_t v = 0; v < y.size(); ++v) {
      if (payment_map[j][v] != 0) x[j] += payment_map[j][v] * y[v];
    }
  }
  return x;
}

std::string StabilityLP::listing() const {
  std::ostringstream out;
  out << (objective == Objective::kMinPay   ? "minimize total pay"
          : objective == Objective::kMaxPay ? "maximize total pay"
                                            : "feasibility")
      << "\n";
  for (int j = 0; j < workers; ++j) {
    out << "x" << j << " =";
    bool any = false;
    for (size_t v = 0; v < variable_names.size(); ++v) {
      if (payment_map[j][v] == 0) continue;
      out << (any ? " + " : " ") << to_string(payment_map[j][v]) << " " << variable_names[v];
      any = true;
    }
    if (!any) out << " 0";
    out << "\n";
  }
  for (size_t r = 0; r < lp.rows.size(); ++r) {
    const StabilityRow& tag = tags[r];
    out << "r" << r << " ";
    if (tag.firm < 0) {
      out << "ir " << set_string(tag.recruited);
    } else if (tag.firm == 0) {
      out << "idle " << set_string(tag.recruited);
    } else {
      out << "firm " << tag.firm << " A=" << set_string(tag.dismissed)
          << " B=" << set_string(tag.recruited);
    }
    out << ":";
    bool any = false;
    for (int v = 0; v < lp.variables; ++v) {
      const Rational& c = lp.rows[r][v];
      if (c == 0) continue;
      out << " " << (c < 0 ? "- " : (any ? "+ " : "")) << to_string(abs(c)) << " "
          << variable_names[v];
      any = true;
    }
    if (!any) out << " 0";
    out << " <= " << to_string(lp.rhs[r]) << "\n";
  }
  return out.str();
}

StabilityLP build_stability_lp(const CompetitionGame& game, const Partition& partition,
                               const StabilityOptions& options) {
  const int n = game.n();
  const int k = game.k();
  if (static_cast<int>(partition.assignment.size()) != n) {
    throw PreconditionError("partition does not cover every worker");
  }
  for (int a : partition.assignment) {
    if (a < 0 || a > k) throw PreconditionError("partition names a firm outside 1..k");
  }
  if (!options.collapse_types && n > 16) throw GuardError("uncollapsed stability LP limited to 16 workers");
  const auto classes = row_classes(game, options.collapse_types, options.proportional);

  StabilityLP out;
  out.workers = n;
  out.objective = options.objective;
  if (options.proportional) {
    out.structure = PaymentStructure::kProportional;
    out.variable_names = {"delta"};
    for (int j = 0; j < n; ++j) out.payment_map.push_back({Rational(game.weights()[j])});
  } else if (options.collapse_types) {
    out.structure = PaymentStructure::kPerType;
    const auto types = worker_types(game);
    const auto index = type_index(types, n);
    for (size_t t = 0; t < types.size(); ++t) out.variable_names.push_back("y" + std::to_string(t));
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> row(types.size());
      row[index[j]] = 1;
      out.payment_map.push_back(std::move(row));
    }
  } else {
    out.structure = PaymentStructure::kPerWorker;
    for (int j = 0; j < n; ++j) {
      out.variable_names.push_back("x" + std::to_string(j));
      std::vector<Rational> row(n);
      row[j] = 1;
      out.payment_map.push_back(std::move(row));
    }
  }
  const int vars = static_cast<int>(out.variable_names.size());
  out.lp.variables = vars;

  std::map<std::vector<Rational>, size_t> seen;
  auto add = [&](std::vector<Rational> coef, Rational rhs, StabilityRow tag) {
    auto it = seen.find(coef);
    if (it != seen.end()) {
      if (rhs < out.lp.rhs[it->second]) {
        out.lp.rhs[it->second] = std::move(rhs);
        out.tags[it->second] = tag;
      }
      return;
    }
    seen.emplace(coef, out.lp.rows.size());
    out.lp.add_row(std::move(coef), std::move(rhs));
    out.tags.push_back(tag);
  };
  auto coefficients = [&](WorkerSet plus, WorkerSet minus) {
    std::vector<Rational> c(vars);
    for (int j : members(plus)) {
      for (int v = 0; v < vars; ++v) c[v] += out.payment_map[j][v];
    }
    for (int j : members(minus)) {
      for (int v = 0; v < vars; ++v) c[v] -= out.payment_map[j][v];
    }
    return c;
  };

  // Individual rationality and idle workers.
  for (int j = 0; j < n; ++j) {
    const WorkerSet bit = WorkerSet{1} << j;
    add(coefficients(0, bit), Rational(0), {-1, 0, bit});
    if (partition.assignment[j] == 0) add(coefficients(bit, 0), Rational(0), {0, 0, bit});
  }

  const auto parts = partition.parts();
  double total_rows = 0;
  for (int i = 1; i <= k; ++i) {
    const WorkerSet si = parts[i];
    std::vector<std::vector<int>> inside, outside;
    double rows = 1;
    for (const auto& cls : classes) {
      std::vector<int> in, outs;
      for (int j : cls) (contains(si, j) ? in : outs).push_back(j);
      rows *= static_cast<double>(in.size() + 1) * static_cast<double>(outs.size() + 1);
      inside.push_back(std::move(in));
      outside.push_back(std::move(outs));
    }
    total_rows += rows;
    if (total_rows > options.row_limit) throw GuardError("stability LP exceeds the row guard");
    const Rational base = game.value(i, si);
    const size_t c = classes.size();
    std::vector<int> a(c, 0), b(c, 0);
    for (;;) {
      WorkerSet dismissed = 0;
      WorkerSet recruited = 0;
      for (size_t t = 0; t < c; ++t) {
        for (int p = 0; p < a[t]; ++p) dismissed |= WorkerSet{1} << inside[t][p];
        for (int p = 0; p < b[t]; ++p) recruited |= WorkerSet{1} << outside[t][p];
      }
      if (dismissed || recruited) {
        Rational rhs = base - game.value(i, (si & ~dismissed) | recruited);
        add(coefficients(dismissed, recruited), std::move(rhs), {i, dismissed, recruited});
      }
      // Odometer over (a, b).
      size_t t = 0;
      for (; t < c; ++t) {
        if (a[t] < static_cast<int>(inside[t].size())) {
          ++a[t];
          break;
        }
        a[t] = 0;
        if (b[t] < static_cast<int>(outside[t].size())) {
          ++b[t];
          break;
        }
        b[t] = 0;
      }
      if (t == c) break;
    }
  }

  if (options.objective != Objective::kFeasibility) {
    std::vector<Rational> total(vars);
    for (int j = 0; j < n; ++j) {
      for (int v = 0; v < vars; ++v) total[v] += out.payment_map[j][v];
    }
    if (options.objective == Objective::kMinPay) {
      for (auto& c : total) c = -c;
    }
    out.lp.objective = std::move(total);
  }
  return out;
}

StabilitySolution solve_stability_lp(const StabilityLP& lp, bool certificate) {
  LpOptions options;
  options.lazy_rows = lp.lp.rows.size() > 256;
  options.certificate = certificate;
  const LpResult result = solve_lp(lp.lp, options);
  StabilitySolution out;
  if (result.status == LpStatus::kUnbounded) throw Error("stability LP is unbounded");
  if (result.status == LpStatus::kInfeasible) {
    for (int r : result.conflict) {
      out.conflict.push_back(lp.tags[r]);
      out.conflict_rhs.push_back(lp.lp.rhs[r]);
    }
    return out;
  }
  out.feasible = true;
  out.variables = result.solution;
  out.payments = lp.payments(result.solution);
  out.total_pay = sum(out.payments);
  return out;
}

PspeSearch find_pspe(const CompetitionGame& game, Objective objective, const Guards& guards,
                     bool certificates) {
  PspeSearch out;
  Rational best_total;
  for (const Partition& p : enumerate_optimal_partitions(game, guards)) {
    StabilityOptions options;
    options.objective = objective;
    const StabilitySolution solution = solve_stability_lp(build_stability_lp(game, p, options), certificates);
    if (solution.feasible) {
      if (objective == Objective::kFeasibility) {
        out.outcome = Outcome{p, solution.payments};
        return out;
      }
      // Pay objectives compare across all optimal partitions.
      const bool better = !out.outcome || (objective == Objective::kMinPay
                                               ? solution.total_pay < best_total
                                               : solution.total_pay > best_total);
      if (better) {
        out.outcome = Outcome{p, solution.payments};
        best_total = solution.total_pay;
      }
      continue;
    }
    out.refuted.push_back(p);
    out.certificates.push_back(solution.conflict);
  }
  return out;
}

BestResponse firm_best_response(const CompetitionGame& game, int firm,
                                const std::vector<Rational>& prices) {
  const Valuation& v = game.valuation(firm);
  if (v.kind() == Valuation::Kind::kWeighted) return best_response(v, prices, game.weights());
  const int n = game.n();
  if (n > kMaxExplicitWorkers) throw GuardError("demand enumeration limited to 20 workers");
  const size_t count = size_t{1} << n;
  std::vector<Rational> cost(count);
  BestResponse best;
  for (WorkerSet s = 0; s < count; ++s) {
    if (s) cost[s] = cost[s & (s - 1)] + prices[std::countr_zero(s)];
    Rational profit = game.value(firm, s) - cost[s];
    if (s == 0 || profit > best.profit) {
      best.profit = std::move(profit);
      best.bundle = s;
    }
  }
  return best;
}

DeviationReport deviation_gap(const CompetitionGame& game, const Outcome& outcome) {
  if (static_cast<int>(outcome.payments.size()) != game.n() ||
      static_cast<int>(outcome.partition.assignment.size()) != game.n()) {
    throw PreconditionError("outcome dimensions do not match the game");
  }
  const auto profits = firm_profits(game, outcome);
  DeviationReport report;
  report.gain = 0;
  report.normalized = 0;
  for (int i = 1; i <= game.k(); ++i) {
    const BestResponse br = firm_best_response(game, i, outcome.payments);
    Rational gain = br.profit - profits[i - 1];
    if (gain < 0) gain = 0;
    Rational normalized = gain;
    if (gain > 0) {
      if (profits[i - 1] > 0) {
        normalized = gain / profits[i - 1];
      } else {
        report.normalization_fallback = true;
      }
    }
    if (gain > report.gain) {
      report.gain = gain;
      report.firm = i;
      report.bundle = br.bundle;
    }
    if (normalized > report.normalized) report.normalized = normalized;
    report.firm_gains.push_back(std::move(gain));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

const std::vector<Rational>& table_of(const CompetitionGame& game, int firm) {
  return game.valuation(firm).weighted_values();
}

Outcome proportional_outcome(const CompetitionGame& game, const Partition& p, const Rational& delta) {
  Outcome o{p, {}};
  for (int w : game.weights()) o.payments.push_back(delta * w);
  return o;
}

std::vector<char> achievable_weights(const CompetitionGame& game) {
  std::vector<char> reach(game.total_weight() + 1, 0);
  reach[0] = 1;
  for (int w : game.weights()) {
    for (int t = game.total_weight() - w; t >= 0; --t) {
      if (reach[t]) reach[t + w] = 1;
    }
  }
  return reach;
}

struct Interval {
  Rational lo = 0;
  std::optional<Rational> hi;
  bool empty() const { return hi && *hi < lo; }
};

// Unit payments delta for which x = delta * w leaves no firm a profitable
// deviation: (q_i - q') delta <= v_i(q_i) - v_i(q') for achievable q'.
Interval proportional_interval(const CompetitionGame& game, const Partition& p) {
  const auto reach = achievable_weights(game);
  const auto totals = weight_profile(game, p);
  Interval out;
  for (int i = 1; i <= game.k(); ++i) {
    const auto& v = table_of(game, i);
    const int q = totals[i - 1];
    for (int t = 0; t <= game.total_weight(); ++t) {
      if (!reach[t] || t == q) continue;
      Rational slope = (v[q] - v[t]) / (q - t);
      if (t > q) {
        if (slope > out.lo) out.lo = slope;
      } else if (!out.hi || slope < *out.hi) {
        out.hi = slope;
      }
    }
  }
  return out;
}

bool verifies(const CompetitionGame& game, const Outcome& o) {
  return check_outcome(game, o).all_pass();
}

}  // namespace

std::pair<Outcome, TwoFirmConstruction> two_firm_weighted_pspe(const CompetitionGame& game,
                                                              const Guards& guards) {
  if (game.k() != 2 || !game.all_weighted()) {
    throw PreconditionError("two-firm construction needs two weighted firms");
  }
  if (!is_concave_weighted(game.valuation(1)) || !is_concave_weighted(game.valuation(2))) {
    throw PreconditionError("two-firm construction needs concave valuations");
  }
  auto partitions = enumerate_optimal_partitions(game, guards);
  auto gap = [&](const Partition& p) {
    const auto t = weight_profile(game, p);
    return std::abs(t[0] - t[1]);
  };
  std::stable_sort(partitions.begin(), partitions.end(),
                   [&](const Partition& a, const Partition& b) { return gap(a) < gap(b); });
  const Partition& chosen = partitions.front();
  const auto parts = chosen.parts();
  const auto& v1 = table_of(game, 1);
  const auto& v2 = table_of(game, 2);
  const int total = game.total_weight();

  TwoFirmConstruction c;
  c.q1 = game.weight(parts[1]);
  c.q2 = game.weight(parts[2]);
  if (c.q1 == 0 || c.q2 == 0) {
    const int empty = c.q1 == 0 ? 1 : 2;
    const int w_min = *std::min_element(game.weights().begin(), game.weights().end());
    c.delta_formula = table_of(game, empty)[w_min] / w_min;
    c.method = "empty-part";
  } else {
    auto lightest = [&](WorkerSet s) {
      int w = 0;
      for (int j : members(s)) w = w == 0 ? game.weights()[j] : std::min(w, game.weights()[j]);
      return w;
    };
    c.w_light1 = lightest(parts[1]);
    c.w_light2 = lightest(parts[2]);
    auto upper_slope = [&](const std::vector<Rational>& v, int q, int step) {
      return Rational((v[std::min(q + step, total)] - v[q]) / std::max(1, std::min(step, total - q)));
    };
    c.y1 = (v1[c.q1] - v1[c.q1 - c.w_light1]) / c.w_light1;
    c.y2 = (v2[c.q2] - v2[c.q2 - c.w_light2]) / c.w_light2;
    c.z1 = upper_slope(v1, c.q1, c.w_light2);
    c.z2 = upper_slope(v2, c.q2, c.w_light1);
    auto step = [&](const std::vector<Rational>& v, int q, const Rational& y_other, int& d_star,
                    Rational& z_star) {
      d_star = 0;
      for (int d = 1; q + d <= total; ++d) {
        if ((v[q + d] - v[q]) / d <= y_other) {
          d_star = d;
          break;
        }
      }
      if (d_star == 0) d_star = std::max(1, total - q);
      z_star = q + d_star <= total ? Rational((v[q + d_star] - v[q]) / d_star) : Rational(0);
    };
    step(v1, c.q1, c.y2, c.d_star1, c.z_star1);
    step(v2, c.q2, c.y1, c.d_star2, c.z_star2);
    c.delta_formula = std::max(c.z_star1, c.z_star2);
    c.method = "slopes";
  }
  const Interval interval = proportional_interval(game, chosen);
  c.interval_lo = interval.lo;
  c.interval_hi = interval.hi;

  Outcome outcome = proportional_outcome(game, chosen, c.delta_formula);
  c.formula_verified = verifies(game, outcome);
  if (c.formula_verified) {
    c.delta = c.delta_formula;
    return {outcome, c};
  }
  if (game.is_symmetric() && c.q1 != c.q2 && c.q1 > 0 && c.q2 > 0) {
    const int hi = std::max(c.q1, c.q2);
    const int lo = std::min(c.q1, c.q2);
    const Rational slope = (v1[hi] - v1[lo]) / (hi - lo);
    outcome = proportional_outcome(game, chosen, slope);
    if (verifies(game, outcome)) {
      c.delta = slope;
      c.method = "symmetric-slope";
      return {outcome, c};
    }
  }
  // Clamp into the exact feasible interval of the chosen partition, then of
  // any other optimal partition.
  for (const Partition& p : partitions) {
    const Interval in = proportional_interval(game, p);
    if (in.empty()) continue;
    Rational delta = c.delta_formula;
    if (delta < in.lo) delta = in.lo;
    if (in.hi && delta > *in.hi) delta = *in.hi;
    outcome = proportional_outcome(game, p, delta);
    if (verifies(game, outcome)) {
      c.delta = delta;
      c.method = "interval";
      if (!(p == chosen)) {
        c.interval_lo = in.lo;
        c.interval_hi = in.hi;
        const auto t = weight_profile(game, p);
        c.q1 = t[0];
        c.q2 = t[1];
      }
      return {outcome, c};
    }
  }
  throw Error("no proportional equilibrium found for a two-firm weighted game");
}

std::optional<Outcome> balanced_pspe(const CompetitionGame& game, const Guards& guards) {
  if (!game.all_weighted() || !game.is_symmetric()) {
    throw PreconditionError("balanced construction needs a symmetric weighted game");
  }
  if (!is_concave_weighted(game.valuation(1))) {
    throw PreconditionError("balanced construction needs a concave valuation");
  }
  const auto partition = almost_balanced_partition(game, guards);
  if (!partition) return std::nullopt;
  const auto& v = table_of(game, 1);
  const int q = game.total_weight() / game.k();
  const Rational delta = v[std::min(q + 1, game.total_weight())] - v[q];
  Outcome outcome = proportional_outcome(game, *partition, delta);
  if (deviation_gap(game, outcome).gain != 0) {
    throw Error("balanced construction produced a profitable deviation");
  }
  return outcome;
}

std::optional<HomogeneousResult> homogeneous_min_delta(const CompetitionGame& game,
                                                       const Guards& guards) {
  if (!game.unit_weights() || !game.all_weighted()) {
    throw PreconditionError("homogeneous construction needs unit weights and weighted valuations");
  }
  const int n = game.n();
  std::optional<HomogeneousResult> best;
  for (const Partition& p : enumerate_optimal_partitions(game, guards)) {
    const auto sizes = weight_profile(game, p);
    Rational lower = 0;
    std::optional<Rational> upper;
    for (int i = 1; i <= game.k(); ++i) {
      const auto& v = table_of(game, i);
      const int ni = sizes[i - 1];
      if (ni < n) lower = std::max(lower, Rational(v[ni + 1] - v[ni]));
      if (ni >= 1) {
        Rational m = v[ni] - v[ni - 1];
        if (!upper || m < *upper) upper = m;
      }
    }
    if (upper && *upper < lower) continue;
    StabilityOptions options;
    options.proportional = true;
    options.objective = Objective::kMinPay;
    const StabilitySolution solution = solve_stability_lp(build_stability_lp(game, p, options), false);
    if (!solution.feasible) continue;
    const Rational delta = solution.variables[0];
    if (!best || delta < best->delta) {
      best = HomogeneousResult{Outcome{p, solution.payments}, delta, sizes, lower, upper};
    }
  }
  return best;
}

Outcome synergy_two_firm_pspe(const CompetitionGame& game, const Guards& guards) {
  const auto kind = game.valuation(1).kind();
  if (game.k() != 2 || !game.is_symmetric() ||
      (kind != Valuation::Kind::kSynergy && kind != Valuation::Kind::kInfluence)) {
    throw PreconditionError("synergy construction needs two identical synergy or 2-sparse influence firms");
  }
  // Influence firms go through their synergy matrix; this throws unless the
  // network is 2-sparse.
  const SynergyMatrix m = kind == Valuation::Kind::kSynergy ? game.valuation(1).matrix()
                                                           : network_to_synergy(game.valuation(1).network());
  Outcome outcome;
  outcome.partition = max_cut_two_firm(m, guards);
  for (int j = 0; j < game.n(); ++j) {
    outcome.payments.push_back((synergy_value(m, WorkerSet{1} << j) + m(j, j)) / 2);
  }
  const auto profits = firm_profits(game, outcome);
  const Rational half_cut = cut_weight(m, outcome.partition) / 2;
  if (profits[0] != half_cut || profits[1] != half_cut) {
    throw Error("synergy construction: profits differ from half the cut weight");
  }
  if (deviation_gap(game, outcome).gain != 0) {
    throw Error("synergy construction produced a profitable deviation");
  }
  return outcome;
}

HeuristicPayments heuristic_payments(const CompetitionGame& game, const Partition& partition) {
  if (!game.all_weighted() || !game.is_symmetric()) {
    throw PreconditionError("heuristic payments need a symmetric weighted game");
  }
  const auto& v = table_of(game, 1);
  const auto totals = weight_profile(game, partition);
  const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
  HeuristicPayments out;
  out.gap = *hi - *lo;
  if (out.gap > 0) {
    out.delta = (v[*hi] - v[*lo]) / out.gap;
  } else {
    const int q = game.total_weight() / game.k();
    out.delta = v[std::min(q + 1, game.total_weight())] - v[q];
  }
  for (int w : game.weights()) out.payments.push_back(out.delta * w);
  return out;
}

Rational revenue_baseline(const CompetitionGame& game, const Guards& guards) {
  const Partition p = optimal_partition(game, guards);
  const HeuristicPayments h = heuristic_payments(game, p);
  const int q = game.total_weight() / game.k();
  return table_of(game, 1)[q] - h.delta * q;
}

Outcome fairness_transform(const CompetitionGame& game, const Outcome& outcome,
                           const std::vector<std::vector<int>>& types) {
  Outcome out = outcome;
  const auto& a = outcome.partition.assignment;
  for (const auto& cls : types) {
    std::map<int, std::vector<int>> cells;
    for (int j : cls) cells[a[j]].push_back(j);
    for (const auto& [firm, cell] : cells) {
      Rational total = 0;
      for (int j : cell) total += outcome.payments[j];
      const Rational average = total / static_cast<long>(cell.size());
      for (int j : cell) out.payments[j] = average;
    }
  }
  if (firm_profits(game, out) != firm_profits(game, outcome)) {
    throw Error("fairness transform changed a firm profit");
  }
  return out;
}

OutcomeReport check_outcome(const CompetitionGame& game, const Outcome& outcome) {
  const int n = game.n();
  const int k = game.k();
  if (static_cast<int>(outcome.payments.size()) != n ||
      static_cast<int>(outcome.partition.assignment.size()) != n) {
    throw PreconditionError("outcome dimensions do not match the game");
  }
  OutcomeReport report;
  const auto& x = outcome.payments;
  const auto& a = outcome.partition.assignment;
  const auto parts = outcome.partition.parts();
  for (int j = 0; j < n; ++j) {
    if (x[j] < 0) {
      report.individually_rational = false;
      report.ir_witness = j;
      break;
    }
  }
  const auto profits = firm_profits(game, outcome);
  for (int i = 1; i <= k && report.envy_free; ++i) {
    for (int t = 1; t <= k; ++t) {
      if (t == i) continue;
      if (game.value(i, parts[t]) - payment_total(x, parts[t]) > profits[i - 1]) {
        report.envy_free = false;
        report.envy_witness = std::make_pair(i, t);
        break;
      }
    }
  }
  const auto types = worker_types(game);
  for (const auto& cls : types) {
    for (size_t p = 0; p < cls.size(); ++p) {
      for (size_t q = p + 1; q < cls.size(); ++q) {
        const int j = cls[p], l = cls[q];
        if (x[j] == x[l] || a[j] == 0 || a[l] == 0) continue;
        if (a[j] == a[l] && report.fair) {
          report.fair = false;
          report.fair_witness = std::make_pair(j, l);
        }
        if (a[j] != a[l] && report.cross_firm_equal) {
          report.cross_firm_equal = false;
          report.cross_firm_witness = std::make_pair(j, l);
        }
      }
    }
  }
  for (int j = 0; j < n && report.marginal_bounds; ++j) {
    const WorkerSet bit = WorkerSet{1} << j;
    for (int i = 1; i <= k; ++i) {
      const WorkerSet s = parts[i];
      const bool ok = contains(s, j) ? x[j] <= game.value(i, s) - game.value(i, s & ~bit)
                                     : x[j] >= game.value(i, s | bit) - game.value(i, s);
      if (!ok) {
        report.marginal_bounds = false;
        report.marginal_witness = j;
        break;
      }
    }
  }
  report.deviation = deviation_gap(game, outcome);
  return report;
}

}  // namespace market_eq
