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

// JSON strings in, JSON strings out; the Python package turns rationals into
// fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "market_eq/equilibrium.hpp"
#include "market_eq/experiments.hpp"
#include "market_eq/io.hpp"
#include "market_eq/network.hpp"
#include "market_eq/partition_opt.hpp"

namespace py = pybind11;
namespace me = market_eq;
using me::Json;

namespace {

me::Objective objective(const std::string& s) {
  if (s == "feasible") return me::Objective::kFeasibility;
  if (s == "min-pay") return me::Objective::kMinPay;
  if (s == "max-pay") return me::Objective::kMaxPay;
  throw me::PreconditionError("objective must be feasible, min-pay or max-pay");
}

std::string solve(const std::string& game_json, const std::string& obj) {
  const auto game = me::game_from_json(Json::parse(game_json));
  const auto search = me::find_pspe(game, objective(obj));
  Json out;
  if (search.outcome) {
    out = Json{{"verdict", "pspe"}, {"outcome", me::outcome_to_json(game, *search.outcome)}};
  } else {
    Json refuted = Json::array();
    for (const auto& p : search.refuted) refuted.push_back(me::partition_to_json(p));
    out = Json{{"verdict", "nonexistence"}, {"refuted", refuted}};
  }
  return out.dump();
}

std::string verify(const std::string& game_json, const std::string& outcome_json) {
  const auto game = me::game_from_json(Json::parse(game_json));
  const auto outcome = me::outcome_from_json(Json::parse(outcome_json), game);
  return me::outcome_to_json(game, outcome).dump();
}

std::string optimal_partitions(const std::string& game_json) {
  const auto game = me::game_from_json(Json::parse(game_json));
  Json out = Json::array();
  for (const auto& p : me::enumerate_optimal_partitions(game)) out.push_back(me::partition_to_json(p));
  return out.dump();
}

std::string integrality_gap(const std::string& game_json) {
  return me::gap_report_to_json(me::configuration_lp(me::game_from_json(Json::parse(game_json)))).dump();
}

std::string network_to_synergy(const std::string& network_json) {
  return me::synergy_to_json(me::network_to_synergy(me::network_from_json(Json::parse(network_json)))).dump();
}

std::string synergy_to_network(const std::string& matrix_json) {
  return me::network_to_json(me::synergy_to_network(me::synergy_from_json(Json::parse(matrix_json)))).dump();
}

std::string influence(const std::string& network_json, const std::vector<int>& seeds) {
  return Json(me::to_string(me::influence_exact(me::network_from_json(Json::parse(network_json)),
                                                me::make_set(seeds))))
      .dump();
}

std::string generate(const std::string& spec_json, std::uint64_t default_seed) {
  Json out = Json::array();
  for (const auto& inst : me::generate_dataset(me::generator_from_json(Json::parse(spec_json), default_seed))) {
    out.push_back(me::game_to_json(inst.game));
  }
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact equilibria of competition games (JSON interface)";
  py::register_exception<me::GuardError>(m, "GuardError", PyExc_RuntimeError);
  py::register_exception<me::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  m.def("solve", &solve, py::arg("game"), py::arg("objective") = "feasible");
  m.def("verify", &verify, py::arg("game"), py::arg("outcome"));
  m.def("optimal_partitions", &optimal_partitions, py::arg("game"));
  m.def("integrality_gap", &integrality_gap, py::arg("game"));
  m.def("network_to_synergy", &network_to_synergy, py::arg("network"));
  m.def("synergy_to_network", &synergy_to_network, py::arg("matrix"));
  m.def("influence", &influence, py::arg("network"), py::arg("seeds"));
  m.def("generate", &generate, py::arg("spec"), py::arg("default_seed") = 1);
}
