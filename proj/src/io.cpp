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

#include "market_eq/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace market_eq {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
  if (j.is_number_float()) return parse_rational(j.dump());
  throw PreconditionError("expected a rational, got " + j.dump());
}

Json rational_to_json(const Rational& r) { return to_string(r); }

namespace {

std::vector<Rational> rationals(const Json& j) {
  if (!j.is_array()) throw PreconditionError("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

Json rational_array(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Json set_json(WorkerSet s) {
  Json out = Json::array();
  for (int j : members(s)) out.push_back(j);
  return out;
}

WorkerSet set_from_json(const Json& j) {
  if (!j.is_array()) throw PreconditionError("expected a list of worker indices");
  std::vector<int> workers;
  for (const auto& e : j) workers.push_back(e.get<int>());
  return make_set(workers);
}

Valuation weighted_formula(const Json& f, int total) {
  const std::string type = f.at("type").get<std::string>();
  std::vector<Rational> values;
  if (type == "min") {
    const Rational cap = rational_from_json(f.at("cap"));
    for (int t = 0; t <= total; ++t) values.push_back(std::min(Rational(t), cap));
  } else if (type == "linear") {
    const Rational slope = rational_from_json(f.at("slope"));
    for (int t = 0; t <= total; ++t) values.push_back(slope * t);
  } else if (type == "power") {
    const double exponent = rational_from_json(f.at("exponent")).get_d();
    const long denominator = f.value("denominator", 1000000L);
    for (int t = 0; t <= total; ++t) values.push_back(rationalize(std::pow(t, exponent), denominator));
  } else {
    throw PreconditionError("unknown weighted formula: " + type);
  }
  return Valuation::weighted(std::move(values));
}

}  // namespace

std::vector<WorkerSet> partition_sets(const Partition& p) {
  auto parts = p.parts();
  return std::vector<WorkerSet>(parts.begin() + 1, parts.end());
}

InfluenceNetwork network_from_json(const Json& j) {
  std::vector<int> workers = j.at("workers").get<std::vector<int>>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) {
      throw PreconditionError("edges are [from, to] or [from, to, probability]");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e.size() == 3 ? rational_from_json(e[2]) : Rational(1)});
  }
  return InfluenceNetwork(j.at("nodes").get<int>(), std::move(workers), std::move(edges));
}

Json network_to_json(const InfluenceNetwork& network) {
  Json edges = Json::array();
  for (const auto& e : network.edges()) edges.push_back(Json::array({e.from, e.to, to_string(e.probability)}));
  return Json{{"nodes", network.node_count()}, {"workers", network.workers()}, {"edges", edges}};
}

SynergyMatrix synergy_from_json(const Json& j) {
  const Json& rows = j.is_object() ? j.at("matrix") : j;
  if (!rows.is_array()) throw PreconditionError("synergy matrix must be a list of rows");
  const int n = static_cast<int>(rows.size());
  std::vector<Rational> entries;
  for (const auto& row : rows) {
    auto values = rationals(row);
    if (static_cast<int>(values.size()) != n) throw PreconditionError("synergy matrix must be square");
    entries.insert(entries.end(), values.begin(), values.end());
  }
  return SynergyMatrix(n, std::move(entries));
}

Json synergy_to_json(const SynergyMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Valuation valuation_from_json(const Json& j, const std::vector<int>& weights) {
  const std::string kind = j.at("kind").get<std::string>();
  int total = 0;
  for (int w : weights) total += w;
  const int n = static_cast<int>(weights.size());
  if (kind == "weighted") {
    if (j.contains("values")) return Valuation::weighted(rationals(j.at("values")));
    if (j.contains("formula")) return weighted_formula(j.at("formula"), total);
    throw PreconditionError("weighted firm needs values or formula");
  }
  if (kind == "explicit") {
    if (n > kMaxExplicitWorkers) throw GuardError("explicit valuation limited to 20 workers");
    std::vector<std::optional<Rational>> table(size_t{1} << n);
    table[0] = Rational(0);
    if (j.contains("by_size")) {
      const auto by_size = rationals(j.at("by_size"));
      if (static_cast<int>(by_size.size()) != n + 1) throw PreconditionError("by_size needs n+1 entries");
      for (WorkerSet s = 0; s < table.size(); ++s) table[s] = by_size[set_size(s)];
    }
    if (j.contains("table")) {
      for (const auto& entry : j.at("table")) {
        table.at(set_from_json(entry.at("set"))) = rational_from_json(entry.at("value"));
      }
    }
    std::vector<Rational> full;
    for (WorkerSet s = 0; s < table.size(); ++s) {
      if (!table[s]) throw PreconditionError("explicit table is missing subset " + set_json(s).dump());
      full.push_back(*table[s]);
    }
    return Valuation::explicit_table(n, std::move(full));
  }
  if (kind == "synergy") {
    return Valuation::synergy(std::make_shared<const SynergyMatrix>(synergy_from_json(j.at("matrix"))));
  }
  if (kind == "influence") {
    const std::string mode = j.value("mode", std::string("exact"));
    if (mode != "exact" && mode != "monte-carlo") throw PreconditionError("unknown influence mode " + mode);
    return Valuation::influence(std::make_shared<const InfluenceNetwork>(network_from_json(j.at("network"))),
                                mode == "exact" ? InfluenceMode::kExact : InfluenceMode::kMonteCarlo);
  }
  throw PreconditionError("unknown valuation kind: " + kind);
}

Json valuation_to_json(const Valuation& v) {
  switch (v.kind()) {
    case Valuation::Kind::kWeighted:
      return Json{{"kind", "weighted"}, {"values", rational_array(v.weighted_values())}};
    case Valuation::Kind::kExplicit: {
      Json table = Json::array();
      for (WorkerSet s = 1; s < v.table().size(); ++s) {
        table.push_back(Json{{"set", set_json(s)}, {"value", to_string(v.table()[s])}});
      }
      return Json{{"kind", "explicit"}, {"table", table}};
    }
    case Valuation::Kind::kSynergy:
      return Json{{"kind", "synergy"}, {"matrix", synergy_to_json(v.matrix())}};
    case Valuation::Kind::kInfluence:
      return Json{{"kind", "influence"},
                  {"mode", v.mode() == InfluenceMode::kExact ? "exact" : "monte-carlo"},
                  {"network", network_to_json(v.network())}};
  }
  return Json();
}

CompetitionGame game_from_json(const Json& j) {
  std::vector<int> weights;
  if (j.contains("weights")) {
    weights = j.at("weights").get<std::vector<int>>();
  } else if (j.contains("n")) {
    weights.assign(j.at("n").get<int>(), 1);
  } else {
    throw PreconditionError("game needs weights or n");
  }
  const Json& firms = j.at("firms");
  if (!firms.is_array() || firms.empty()) throw PreconditionError("game needs a non-empty firms list");
  std::vector<Valuation> valuations;
  for (const auto& f : firms) valuations.push_back(valuation_from_json(f, weights));
  if (j.contains("k")) {
    const int k = j.at("k").get<int>();
    if (valuations.size() != 1) throw PreconditionError("k replicates a single firm entry");
    valuations.assign(k, valuations.front());
  }
  CompetitionGame game(std::move(weights), std::move(valuations));
  if (j.contains("metadata")) {
    for (const auto& [key, value] : j.at("metadata").items()) {
      game.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  return game;
}

Json game_to_json(const CompetitionGame& game) {
  Json firms = Json::array();
  for (const auto& v : game.valuations()) firms.push_back(valuation_to_json(v));
  Json out{{"weights", game.weights()}, {"firms", firms}};
  if (!game.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : game.metadata) meta[k] = v;
    out["metadata"] = meta;
  }
  return out;
}

Outcome outcome_from_json(const Json& j, const CompetitionGame& game) {
  Outcome o;
  o.partition.k = game.k();
  o.partition.assignment = j.at("assignment").get<std::vector<int>>();
  o.payments = rationals(j.at("payments"));
  if (static_cast<int>(o.partition.assignment.size()) != game.n() ||
      static_cast<int>(o.payments.size()) != game.n()) {
    throw PreconditionError("outcome dimensions do not match the game");
  }
  for (int a : o.partition.assignment) {
    if (a < 0 || a > game.k()) throw PreconditionError("assignment names a firm outside 0..k");
  }
  return o;
}

Json partition_to_json(const Partition& p) {
  Json parts = Json::array();
  for (WorkerSet s : partition_sets(p)) parts.push_back(set_json(s));
  return Json{{"assignment", p.assignment}, {"firms", parts}};
}

Json deviation_to_json(const DeviationReport& d) {
  return Json{{"firm", d.firm},
              {"bundle", set_json(d.bundle)},
              {"gain", to_string(d.gain)},
              {"normalized", to_string(d.normalized)},
              {"normalization_fallback", d.normalization_fallback},
              {"firm_gains", rational_array(d.firm_gains)}};
}

Json report_to_json(const OutcomeReport& r) {
  auto pair_json = [](const std::optional<std::pair<int, int>>& p) {
    return p ? Json::array({p->first, p->second}) : Json();
  };
  Json out;
  out["individually_rational"] = r.individually_rational;
  if (r.ir_witness) out["ir_witness"] = *r.ir_witness;
  out["envy_free"] = r.envy_free;
  if (r.envy_witness) out["envy_witness"] = pair_json(r.envy_witness);
  out["fair"] = r.fair;
  if (r.fair_witness) out["fair_witness"] = pair_json(r.fair_witness);
  out["cross_firm_equal"] = r.cross_firm_equal;
  if (r.cross_firm_witness) out["cross_firm_witness"] = pair_json(r.cross_firm_witness);
  out["marginal_bounds"] = r.marginal_bounds;
  if (r.marginal_witness) out["marginal_witness"] = *r.marginal_witness;
  out["deviation"] = deviation_to_json(r.deviation);
  out["pspe"] = r.all_pass();
  return out;
}

Json outcome_to_json(const CompetitionGame& game, const Outcome& outcome) {
  const OutcomeReport report = check_outcome(game, outcome);
  return Json{{"assignment", outcome.partition.assignment},
              {"payments", rational_array(outcome.payments)},
              {"profits", rational_array(firm_profits(game, outcome))},
              {"gap", to_string(report.deviation.gain)},
              {"verdicts", report_to_json(report)}};
}

Json gap_report_to_json(const GapReport& r) {
  return Json{{"integral", to_string(r.integral)},
              {"fractional", to_string(r.fractional)},
              {"ratio", to_string(r.ratio)}};
}

Json construction_to_json(const TwoFirmConstruction& c) {
  Json out{{"method", c.method},
           {"q", {c.q1, c.q2}},
           {"lightest", {c.w_light1, c.w_light2}},
           {"y", {to_string(c.y1), to_string(c.y2)}},
           {"z", {to_string(c.z1), to_string(c.z2)}},
           {"d_star", {c.d_star1, c.d_star2}},
           {"z_star", {to_string(c.z_star1), to_string(c.z_star2)}},
           {"delta_formula", to_string(c.delta_formula)},
           {"formula_verified", c.formula_verified},
           {"delta", to_string(c.delta)},
           {"interval_lo", to_string(c.interval_lo)}};
  out["interval_hi"] = c.interval_hi ? Json(to_string(*c.interval_hi)) : Json();
  return out;
}

Json moebius_to_json(const MoebiusTable& t) {
  Json coefficients = Json::array();
  for (WorkerSet s = 1; s < t.coefficients.size(); ++s) {
    if (t.coefficients[s] != 0) {
      coefficients.push_back(Json{{"set", set_json(s)}, {"value", to_string(t.coefficients[s])}});
    }
  }
  Json out{{"representable", t.representable}, {"coefficients", coefficients}};
  if (t.witness) {
    out["witness"] = Json{{"set", set_json(*t.witness)}, {"value", to_string(t.coefficients[*t.witness])}};
  }
  return out;
}

Json certificate_to_json(const std::vector<StabilityRow>& rows, const std::vector<Rational>& rhs) {
  Json out = Json::array();
  for (size_t r = 0; r < rows.size(); ++r) {
    Json row{{"firm", rows[r].firm}, {"dismissed", set_json(rows[r].dismissed)},
             {"recruited", set_json(rows[r].recruited)}};
    if (r < rhs.size()) row["rhs"] = to_string(rhs[r]);
    out.push_back(row);
  }
  return out;
}

GeneratorSpec generator_from_json(const Json& j, std::uint64_t default_seed) {
  const std::string dataset = j.value("dataset", std::string("D1"));
  const int count = j.value("count", 0);
  const std::uint64_t seed = j.value("seed", default_seed);
  GeneratorSpec spec;
  if (dataset == "D1") {
    spec = GeneratorSpec::d1(count, seed);
  } else if (dataset == "D2") {
    spec = GeneratorSpec::d2(count, seed);
  } else if (dataset == "D3") {
    spec = GeneratorSpec::d3(count, seed);
  } else {
    throw PreconditionError("unknown dataset " + dataset);
  }
  auto range = [&](const char* key, int& lo, int& hi) {
    if (!j.contains(key)) return;
    const auto r = j.at(key).get<std::vector<int>>();
    if (r.size() != 2) throw PreconditionError(std::string(key) + " must be [lo, hi]");
    lo = r[0];
    hi = r[1];
  };
  range("workers", spec.min_workers, spec.max_workers);
  range("types", spec.min_types, spec.max_types);
  range("weight", spec.min_weight, spec.max_weight);
  spec.weight_cap = j.value("weight_cap", spec.weight_cap);
  spec.firms = j.value("firms", spec.firms);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "random-concave") {
      spec.mode = ValuationMode::kRandomConcave;
    } else if (mode == "power-alpha") {
      spec.mode = ValuationMode::kPowerAlpha;
    } else if (mode == "random-unconstrained") {
      spec.mode = ValuationMode::kRandomUnconstrained;
    } else {
      throw PreconditionError("unknown valuation mode " + mode);
    }
  }
  if (j.contains("alphas")) spec.alphas = j.at("alphas").get<std::vector<double>>();
  spec.validate();
  return spec;
}

Json summary_to_json(const StudySummary& s) {
  return Json{{"instances", s.instances},
              {"errors", s.errors},
              {"almost_balanced_fraction", s.almost_balanced},
              {"h_zero_fraction", s.h_zero},
              {"h_at_most_0.05_fraction", s.h_small},
              {"pspe_found", s.pspe_found},
              {"lp_infeasible", s.lp_infeasible},
              {"strict_pspe_found", s.strict_pspe_found},
              {"stable_fraction", s.stable_fraction},
              {"revenue_records", s.revenue_records},
              {"r0_in_range_fraction", s.r0_in_range}};
}

}  // namespace market_eq
