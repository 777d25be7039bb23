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

#ifndef MARKET_EQ_IO_HPP_
#define MARKET_EQ_IO_HPP_

#include <string>

#include "market_eq/equilibrium.hpp"
#include "market_eq/experiments.hpp"
#include "market_eq/game.hpp"
#include "market_eq/network.hpp"
#include "market_eq/partition_opt.hpp"
#include <nlohmann/json.hpp>

namespace market_eq {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Accepts "p/q" strings, integers and decimal literals.
Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);
std::vector<WorkerSet> partition_sets(const Partition& p);

CompetitionGame game_from_json(const Json& j);
Json game_to_json(const CompetitionGame& game);

InfluenceNetwork network_from_json(const Json& j);
Json network_to_json(const InfluenceNetwork& network);
SynergyMatrix synergy_from_json(const Json& j);
Json synergy_to_json(const SynergyMatrix& m);
Valuation valuation_from_json(const Json& j, const std::vector<int>& weights);
Json valuation_to_json(const Valuation& v);

Outcome outcome_from_json(const Json& j, const CompetitionGame& game);
Json outcome_to_json(const CompetitionGame& game, const Outcome& outcome);
Json report_to_json(const OutcomeReport& report);
Json deviation_to_json(const DeviationReport& report);
Json partition_to_json(const Partition& p);
Json gap_report_to_json(const GapReport& report);
Json construction_to_json(const TwoFirmConstruction& c);
Json moebius_to_json(const MoebiusTable& table);
Json certificate_to_json(const std::vector<StabilityRow>& rows, const std::vector<Rational>& rhs = {});

GeneratorSpec generator_from_json(const Json& j, std::uint64_t default_seed);
Json summary_to_json(const StudySummary& s);

}  // namespace market_eq

#endif  // MARKET_EQ_IO_HPP_
