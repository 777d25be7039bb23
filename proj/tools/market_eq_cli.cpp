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

// market-eq: command line front end.
//
// Exit codes: 0 success, 1 input or guard error, 2 principled negative
// verdict, 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "market_eq/equilibrium.hpp"
#include "market_eq/experiments.hpp"
#include "market_eq/io.hpp"
#include "market_eq/network.hpp"
#include "market_eq/partition_opt.hpp"

namespace me = market_eq;
using me::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNegative = 2;
constexpr int kVerifyFailed = 3;

struct Globals {
  bool unsafe_limits = false;
  std::string out;
  me::Guards guards() const { return unsafe_limits ? me::Guards::unlimited() : me::Guards{}; }
};

void emit(const Globals& g, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    me::write_text_file(g.out, text);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MARKET_EQ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw me::PreconditionError("MARKET_EQ_SEED must be an unsigned integer");
    }
  }
  return 1;
}

me::Objective parse_objective(const std::string& s) {
  if (s == "feasible") return me::Objective::kFeasibility;
  if (s == "min-pay") return me::Objective::kMinPay;
  return me::Objective::kMaxPay;
}

Json outcome_result(const me::CompetitionGame& game, const me::Outcome& outcome) {
  Json out = me::outcome_to_json(game, outcome);
  out["total_pay"] = me::to_string(me::payment_total(outcome.payments, me::full_set(game.n())));
  return out;
}

// --- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string game;
  std::string objective = "feasible";
  std::string construction = "auto";
  bool proportional = false;
  bool no_certificates = false;
};

int proportional_search(const Globals& g, const me::CompetitionGame& game, const SolveArgs& a) {
  me::StabilityOptions opts;
  opts.objective = parse_objective(a.objective);
  opts.proportional = true;
  Json refuted = Json::array();
  for (const auto& p : me::enumerate_optimal_partitions(game, g.guards())) {
    const auto lp = me::build_stability_lp(game, p, opts);
    const auto sol = me::solve_stability_lp(lp, !a.no_certificates);
    if (sol.feasible) {
      me::Outcome o{p, sol.payments};
      Json out{{"verdict", "pspe"}, {"proportional", true}, {"delta", me::to_string(sol.variables.at(0))}};
      out["outcome"] = outcome_result(game, o);
      emit(g, out);
      return me::check_outcome(game, o).all_pass() ? kOk : kVerifyFailed;
    }
    refuted.push_back(Json{{"partition", me::partition_to_json(p)},
                           {"certificate", me::certificate_to_json(sol.conflict, sol.conflict_rhs)}});
  }
  emit(g, Json{{"verdict", "no-proportional-pspe"}, {"optimal_partitions", refuted.size()}, {"refuted", refuted}});
  return kNegative;
}

int cmd_solve(const Globals& g, const SolveArgs& a) {
  const auto game = me::game_from_json(me::read_json_file(a.game));
  if (a.construction == "auto") {
    if (a.proportional) return proportional_search(g, game, a);
    const auto search = me::find_pspe(game, parse_objective(a.objective), g.guards(), !a.no_certificates);
    if (search.outcome) {
      Json out{{"verdict", "pspe"}, {"outcome", outcome_result(game, *search.outcome)}};
      emit(g, out);
      return me::check_outcome(game, *search.outcome).all_pass() ? kOk : kVerifyFailed;
    }
    Json refuted = Json::array();
    for (size_t i = 0; i < search.refuted.size(); ++i) {
      Json entry{{"partition", me::partition_to_json(search.refuted[i])}};
      if (i < search.certificates.size()) entry["certificate"] = me::certificate_to_json(search.certificates[i]);
      refuted.push_back(entry);
    }
    emit(g, Json{{"verdict", "nonexistence"}, {"optimal_partitions", refuted.size()}, {"refuted", refuted}});
    return kNegative;
  }

  me::Outcome outcome;
  Json extra = Json::object();
  try {
    if (a.construction == "two-firm") {
      auto [o, c] = me::two_firm_weighted_pspe(game, g.guards());
      outcome = std::move(o);
      extra = me::construction_to_json(c);
    } else if (a.construction == "balanced") {
      auto o = me::balanced_pspe(game, g.guards());
      if (!o) {
        emit(g, Json{{"verdict", "not-applicable"}, {"reason", "no almost-balanced partition"}});
        return kNegative;
      }
      outcome = *o;
    } else if (a.construction == "homogeneous") {
      auto r = me::homogeneous_min_delta(game, g.guards());
      if (!r) {
        emit(g, Json{{"verdict", "no-proportional-pspe"}, {"reason", "no optimal size profile admits a common unit payment"}});
        return kNegative;
      }
      outcome = r->outcome;
      extra = Json{{"delta", me::to_string(r->delta)}, {"sizes", r->sizes},
                   {"lower_bound", me::to_string(r->lower_bound)}};
      extra["upper_bound"] = r->upper_bound ? Json(me::to_string(*r->upper_bound)) : Json();
    } else {
      outcome = me::synergy_two_firm_pspe(game, g.guards());
    }
  } catch (const me::PreconditionError& e) {
    emit(g, Json{{"verdict", "not-applicable"}, {"reason", e.what()}});
    return kNegative;
  }
  Json out{{"verdict", "pspe"}, {"construction", a.construction}, {"outcome", outcome_result(game, outcome)}};
  if (!extra.empty()) out["details"] = extra;
  emit(g, out);
  return me::check_outcome(game, outcome).all_pass() ? kOk : kVerifyFailed;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& game_path, const std::string& outcome_path) {
  const auto game = me::game_from_json(me::read_json_file(game_path));
  const auto outcome = me::outcome_from_json(me::read_json_file(outcome_path), game);
  const auto report = me::check_outcome(game, outcome);
  Json out{{"profits", Json::array()}, {"gap", me::to_string(report.deviation.gain)},
           {"report", me::report_to_json(report)}};
  for (const auto& r : me::firm_profits(game, outcome)) out["profits"].push_back(me::to_string(r));
  out["optimal_welfare"] = me::to_string(me::optimal_welfare(game, g.guards()));
  out["welfare"] = me::to_string(me::social_welfare(game, outcome.partition));
  emit(g, out);
  return report.all_pass() ? kOk : kVerifyFailed;
}

// --- convert ---------------------------------------------------------------

const Json& network_section(const Json& j) {
  if (j.contains("firms")) return j.at("firms").at(0).at("network");
  return j;
}

int cmd_convert(const Globals& g, const std::string& direction, const std::string& path, int firm) {
  const Json in = me::read_json_file(path);
  if (direction == "net2syn") {
    const auto network = me::network_from_json(network_section(in));
    const int t = me::sparsity(network);
    if (t > 2) {
      emit(g, Json{{"verdict", "not-2-sparse"}, {"sparsity", t}});
      return kNegative;
    }
    try {
      emit(g, Json{{"verdict", "converted"}, {"sparsity", t}, {"matrix", me::synergy_to_json(me::network_to_synergy(network))}});
    } catch (const me::PreconditionError& e) {
      emit(g, Json{{"verdict", "not-convertible"}, {"reason", e.what()}});
      return kNegative;
    }
    return kOk;
  }
  if (direction == "syn2net") {
    const auto matrix = me::synergy_from_json(in);
    const auto network = me::synergy_to_network(matrix);
    emit(g, Json{{"verdict", "converted"}, {"sparsity", me::sparsity(network)}, {"network", me::network_to_json(network)}});
    return kOk;
  }
  // moebius
  std::vector<int> weights;
  if (in.contains("weights")) {
    weights = in.at("weights").get<std::vector<int>>();
  } else {
    weights.assign(in.at("n").get<int>(), 1);
  }
  const Json& firms = in.at("firms");
  if (firm < 1 || firm > static_cast<int>(firms.size())) throw me::PreconditionError("--firm out of range");
  const auto v = me::valuation_from_json(firms.at(firm - 1), weights);
  const auto table = me::moebius_decomposition(me::tabulate(v, weights), static_cast<int>(weights.size()));
  Json out = me::moebius_to_json(table);
  out = Json{{"verdict", table.representable ? "representable" : "not-representable"}, {"decomposition", out}};
  emit(g, out);
  return table.representable ? kOk : kNegative;
}

// --- influence -------------------------------------------------------------

struct InfluenceArgs {
  std::string network;
  std::vector<int> seeds;
  std::string mode = "exact";
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

int cmd_influence(const Globals& g, const InfluenceArgs& a) {
  const auto network = me::network_from_json(network_section(me::read_json_file(a.network)));
  const me::WorkerSet s = me::make_set(a.seeds);
  Json out{{"seeds", a.seeds}, {"sparsity", me::sparsity(network)}};
  if (a.mode == "exact") {
    const int limit = g.unsafe_limits ? 62 : me::kMaxProbabilisticEdges;
    const auto value = me::influence_exact(network, s, limit);
    out["mode"] = "exact";
    out["value"] = me::to_string(value);
    out["decimal"] = me::to_decimal(value, 12);
  } else {
    const auto est = me::influence_monte_carlo(network, s, a.samples, a.seed_set ? a.seed : default_seed(), a.threads);
    out["mode"] = "monte-carlo";
    out["samples"] = est.samples;
    out["mean"] = me::to_string(est.mean);
    out["estimate"] = est.estimate;
    out["standard_error"] = est.standard_error;
  }
  emit(g, out);
  return kOk;
}

// --- gap -------------------------------------------------------------------

int cmd_gap(const Globals& g, const std::string& path) {
  const auto game = me::game_from_json(me::read_json_file(path));
  const auto report = me::configuration_lp(game, g.guards());
  Json out = me::gap_report_to_json(report);
  out["equilibrium_prices_possible"] = report.ratio == 1;
  if (game.all_weighted()) {
    Json profiles = Json::array();
    for (const auto& p : me::enumerate_optimal_partitions(game, g.guards())) {
      profiles.push_back(me::weight_profile(game, p));
    }
    out["optimal_weight_profiles"] = profiles;
  }
  emit(g, out);
  return kOk;
}

// --- generate / experiment -------------------------------------------------

int cmd_generate(const Globals& g, const std::string& spec_path, const std::string& dir) {
  const auto spec = me::generator_from_json(me::read_json_file(spec_path), default_seed());
  const auto instances = me::generate_dataset(spec);
  if (dir.empty()) {
    Json all = Json::array();
    for (const auto& inst : instances) all.push_back(me::game_to_json(inst.game));
    emit(g, all);
    return kOk;
  }
  std::filesystem::create_directories(dir);
  for (const auto& inst : instances) {
    me::write_text_file(dir + "/instance_" + std::to_string(inst.id) + ".json",
                        me::game_to_json(inst.game).dump(2) + "\n");
  }
  emit(g, Json{{"instances", instances.size()}, {"directory", dir}});
  return kOk;
}

struct ExperimentArgs {
  std::string spec;
  std::string dir;
  int threads = 1;
  bool revenue = false;
  bool strict_census = false;
};

int cmd_experiment(const Globals& g, const ExperimentArgs& a) {
  const Json spec_json = me::read_json_file(a.spec);
  const auto spec = me::generator_from_json(spec_json, default_seed());
  me::StudyOptions opts;
  opts.threads = a.threads;
  opts.guards = g.guards();
  opts.revenue = a.revenue || spec_json.value("revenue", spec.kind == me::DatasetKind::kD3);
  opts.strict_census = a.strict_census || spec_json.value("strict_census", false);
  const auto records = me::run_study(me::generate_dataset(spec), opts);
  const auto summary = me::summarize(records);
  if (a.dir.empty()) throw me::PreconditionError("--out directory is required");
  std::filesystem::create_directories(a.dir);
  me::write_text_file(a.dir + "/stability.csv", me::stability_csv(records));
  me::write_text_file(a.dir + "/survival.csv", me::survival_csv(records));
  if (opts.revenue) me::write_text_file(a.dir + "/revenue.csv", me::revenue_csv(records));
  const Json s = me::summary_to_json(summary);
  me::write_text_file(a.dir + "/summary.json", s.dump(2) + "\n");
  std::cout << s.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact equilibria of competition games between firms hiring workers"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--unsafe-limits", g.unsafe_limits, "Lift the default size guards");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Find an equilibrium or prove none exists");
  s->add_option("game", solve.game, "Game JSON file")->required()->check(CLI::ExistingFile);
  s->add_option("--objective", solve.objective, "feasible, min-pay or max-pay")
      ->check(CLI::IsMember({"feasible", "min-pay", "max-pay"}));
  s->add_option("--construction", solve.construction, "auto, two-firm, balanced, homogeneous or synergy")
      ->check(CLI::IsMember({"auto", "two-firm", "balanced", "homogeneous", "synergy"}));
  s->add_flag("--proportional", solve.proportional, "Restrict payments to delta times weight");
  s->add_flag("--no-certificates", solve.no_certificates, "Skip infeasibility certificates");
  s->add_option("-o,--out", g.out, "Write the result here instead of stdout");

  std::string game_path, outcome_path;
  auto* v = app.add_subcommand("verify", "Check an outcome against every equilibrium predicate");
  v->add_option("game", game_path, "Game JSON file")->required()->check(CLI::ExistingFile);
  v->add_option("outcome", outcome_path, "Outcome JSON file")->required()->check(CLI::ExistingFile);
  v->add_option("-o,--out", g.out, "Write the report here instead of stdout");

  std::string direction, convert_path;
  int firm = 1;
  auto* c = app.add_subcommand("convert", "Translate between networks, synergy matrices and Moebius form");
  c->add_option("--direction", direction, "net2syn, syn2net or moebius")
      ->required()
      ->check(CLI::IsMember({"net2syn", "syn2net", "moebius"}));
  c->add_option("input", convert_path, "Input JSON file")->required()->check(CLI::ExistingFile);
  c->add_option("--firm", firm, "Firm whose valuation is decomposed (moebius)");
  c->add_option("-o,--out", g.out, "Write the result here instead of stdout");

  InfluenceArgs infl;
  auto* i = app.add_subcommand("influence", "Expected cascade size of a seed set");
  i->add_option("network", infl.network, "Network JSON file")->required()->check(CLI::ExistingFile);
  i->add_option("--seeds", infl.seeds, "Worker indices")->delimiter(',');
  i->add_option("--mode", infl.mode, "exact or monte-carlo")->check(CLI::IsMember({"exact", "monte-carlo"}));
  i->add_option("--samples", infl.samples, "Monte-Carlo sample count");
  auto* seed_opt = i->add_option("--seed", infl.seed, "Master seed (default MARKET_EQ_SEED or 1)");
  i->add_option("--threads", infl.threads, "Worker threads")->check(CLI::PositiveNumber);
  i->add_option("-o,--out", g.out, "Write the result here instead of stdout");

  std::string gap_path;
  auto* gp = app.add_subcommand("gap", "Configuration LP integrality ratio");
  gp->add_option("game", gap_path, "Game JSON file")->required()->check(CLI::ExistingFile);
  gp->add_option("-o,--out", g.out, "Write the result here instead of stdout");

  std::string gen_spec, gen_dir;
  auto* gen = app.add_subcommand("generate", "Draw random instances from a dataset spec");
  gen->add_option("--spec", gen_spec, "Dataset spec JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--dir", gen_dir, "Write one game file per instance here");
  gen->add_option("-o,--out", g.out, "Write the JSON listing here instead of stdout");

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run the stability and revenue study, emitting CSV");
  e->add_option("--spec", exp.spec, "Dataset spec JSON")->required()->check(CLI::ExistingFile);
  e->add_option("--out", exp.dir, "Output directory")->required();
  e->add_option("--threads", exp.threads, "Worker threads")->check(CLI::PositiveNumber);
  e->add_flag("--revenue", exp.revenue, "Also solve the min and max revenue LPs");
  e->add_flag("--strict-census", exp.strict_census, "Try every optimal partition when the canonical one fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*s) return cmd_solve(g, solve);
    if (*v) return cmd_verify(g, game_path, outcome_path);
    if (*c) return cmd_convert(g, direction, convert_path, firm);
    if (*i) {
      infl.seed_set = seed_opt->count() > 0;
      return cmd_influence(g, infl);
    }
    if (*gp) return cmd_gap(g, gap_path);
    if (*gen) return cmd_generate(g, gen_spec, gen_dir);
    if (*e) return cmd_experiment(g, exp);
  } catch (const me::GuardError& err) {
    std::cerr << "market-eq: guard: " << err.what() << " (use --unsafe-limits to override)\n";
    return kInputError;
  } catch (const me::PreconditionError& err) {
    std::cerr << "market-eq: " << err.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "market-eq: malformed input: " << err.what() << "\n";
    return kInputError;
  } catch (const std::exception& err) {
    std::cerr << "market-eq: error: " << err.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
