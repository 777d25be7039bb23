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

#include "market_eq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "market_eq/equilibrium.hpp"

namespace market_eq {

GeneratorSpec GeneratorSpec::d1(int count, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = DatasetKind::kD1;
  s.count = count;
  s.seed = seed;
  return s;
}

GeneratorSpec GeneratorSpec::d2(int count, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = DatasetKind::kD2;
  s.count = count;
  s.min_workers = 4;
  s.max_workers = 11;
  s.weight_cap = 80;
  s.seed = seed;
  return s;
}

GeneratorSpec GeneratorSpec::d3(int count, std::uint64_t seed) {
  GeneratorSpec s = d1(count, seed);
  s.kind = DatasetKind::kD3;
  s.mode = ValuationMode::kPowerAlpha;
  s.alphas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  return s;
}

void GeneratorSpec::validate() const {
  if (count < 0) throw PreconditionError("instance count must be non-negative");
  if (min_workers < 1 || min_workers > max_workers) throw PreconditionError("empty worker-count range");
  if (max_workers > 64) throw PreconditionError("at most 64 workers");
  if (min_weight < 1 || min_weight > max_weight) throw PreconditionError("empty weight range");
  if (firms < 2) throw PreconditionError("at least two firms");
  if (kind == DatasetKind::kD1 || kind == DatasetKind::kD3) {
    if (min_types < 1 || min_types > max_types) throw PreconditionError("empty type-count range");
    if (min_types > min_workers && min_types > max_workers) {
      throw PreconditionError("type count exceeds the worker count");
    }
    if (max_weight - min_weight + 1 < min_types) {
      throw PreconditionError("weight range too narrow for distinct type weights");
    }
  }
  if (weight_cap > 0) {
    if (weight_cap <= max_weight) throw PreconditionError("weight cap must exceed the largest weight");
    if (min_workers * min_weight >= weight_cap) throw PreconditionError("weight cap too small");
  }
  if (kind == DatasetKind::kD3 || mode == ValuationMode::kPowerAlpha) {
    if (alphas.empty()) throw PreconditionError("power valuations need an alpha list");
    for (double a : alphas) {
      if (!(a > 0 && a < 1)) throw PreconditionError("alpha values must lie in (0,1)");
    }
  }
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

Rational unit_rational(std::mt19937_64& rng) {
  static const mpz_class denominator = mpz_class(1) << 53;
  const std::uint64_t bits = rng() >> 11;
  Rational r(mpz_class(static_cast<unsigned long>(bits)), denominator);
  r.canonicalize();
  return r;
}

std::vector<int> draw_weights(const GeneratorSpec& spec, std::mt19937_64& rng) {
  // n stays fixed across redraws so the cap does not skew the worker count.
  const int n = uniform_int(rng, spec.min_workers, spec.max_workers);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> weights;
    if (spec.kind == DatasetKind::kD2) {
      for (int j = 0; j < n; ++j) weights.push_back(uniform_int(rng, spec.min_weight, spec.max_weight));
    } else {
      const int types = uniform_int(rng, std::min(spec.min_types, n), std::min(spec.max_types, n));
      std::vector<int> pool;
      for (int w = spec.min_weight; w <= spec.max_weight; ++w) pool.push_back(w);
      for (int t = 0; t < types; ++t) {
        std::swap(pool[t], pool[t + uniform_int(rng, 0, static_cast<int>(pool.size()) - 1 - t)]);
      }
      std::vector<int> counts(types, 1);
      for (int extra = n - types; extra > 0; --extra) ++counts[uniform_int(rng, 0, types - 1)];
      for (int t = 0; t < types; ++t) weights.insert(weights.end(), counts[t], pool[t]);
    }
    int total = 0;
    for (int w : weights) total += w;
    if (spec.weight_cap == 0 || total < spec.weight_cap) return weights;
  }
  throw PreconditionError("generator could not satisfy the weight cap");
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t master, std::uint64_t index) {
  return mix(mix(master) ^ mix(index + 0x632BE59BD9B4E019ULL));
}

Valuation gen_random_concave_value(int total_weight, std::mt19937_64& rng) {
  if (total_weight < 1) throw PreconditionError("total weight must be positive");
  std::vector<Rational> increments;
  for (int t = 0; t < total_weight; ++t) increments.push_back(unit_rational(rng));
  std::sort(increments.begin(), increments.end(), std::greater<>());
  std::vector<Rational> values{Rational(0)};
  for (const auto& inc : increments) values.push_back(values.back() + inc);
  return Valuation::weighted(std::move(values));
}

Valuation gen_random_unconstrained_value(int total_weight, std::mt19937_64& rng) {
  if (total_weight < 1) throw PreconditionError("total weight must be positive");
  std::vector<Rational> values{Rational(0)};
  for (int t = 0; t < total_weight; ++t) values.push_back(values.back() + unit_rational(rng));
  return Valuation::weighted(std::move(values));
}

Valuation power_value(int total_weight, double alpha) {
  std::vector<Rational> values;
  for (int t = 0; t <= total_weight; ++t) values.push_back(rationalize(std::pow(t, alpha)));
  values[0] = 0;
  return Valuation::weighted(std::move(values));
}

std::vector<Instance> generate_dataset(const GeneratorSpec& spec) {
  spec.validate();
  std::vector<Instance> out;
  for (int index = 0; index < spec.count; ++index) {
    std::mt19937_64 rng(instance_seed(spec.seed, static_cast<std::uint64_t>(index)));
    const std::vector<int> weights = draw_weights(spec, rng);
    int total = 0;
    for (int w : weights) total += w;
    auto replicate = [&](const Valuation& v) { return std::vector<Valuation>(spec.firms, v); };
    if (spec.kind == DatasetKind::kD3 || spec.mode == ValuationMode::kPowerAlpha) {
      for (size_t a = 0; a < spec.alphas.size(); ++a) {
        CompetitionGame game(weights, replicate(power_value(total, spec.alphas[a])));
        game.metadata["valuation"] = "power";
        game.metadata["alpha"] = std::to_string(spec.alphas[a]);
        game.metadata["rationalized"] = "denominator 1000000";
        out.push_back(Instance{index * static_cast<int>(spec.alphas.size()) + static_cast<int>(a),
                               std::move(game), spec.alphas[a]});
      }
      continue;
    }
    const Valuation v = spec.mode == ValuationMode::kRandomUnconstrained
                            ? gen_random_unconstrained_value(total, rng)
                            : gen_random_concave_value(total, rng);
    CompetitionGame game(weights, replicate(v));
    game.metadata["valuation"] =
        spec.mode == ValuationMode::kRandomUnconstrained ? "random-unconstrained" : "random-concave";
    out.push_back(Instance{index, std::move(game), std::nullopt});
  }
  return out;
}

namespace {

ExperimentRecord study_one(const Instance& instance, const StudyOptions& options) {
  ExperimentRecord rec;
  rec.id = instance.id;
  rec.alpha = instance.alpha;
  const CompetitionGame& game = instance.game;
  rec.n = game.n();
  rec.total_weight = game.total_weight();
  try {
    rec.types = static_cast<int>(worker_types(game).size());
    const auto profiles = reachable_weight_profiles(game, options.guards);
    const WeightedOptimum opt = optimal_partition_weighted(game, options.guards);
    rec.profile = opt.profile.totals;
    const auto [lo, hi] = std::minmax_element(rec.profile.begin(), rec.profile.end());
    rec.gap = *hi - *lo;
    for (const auto& [totals, assignment] : profiles) {
      const auto [a, b] = std::minmax_element(totals.begin(), totals.end());
      if (*b - *a <= 1) {
        rec.almost_balanced = true;
        break;
      }
    }
    const HeuristicPayments heuristic = heuristic_payments(game, opt.partition);
    rec.delta = heuristic.delta;
    const int q = game.total_weight() / game.k();
    rec.r0 = game.valuation(1).weighted_values()[q] - heuristic.delta * q;
    if (options.stability) {
      const DeviationReport dev = deviation_gap(game, Outcome{opt.partition, heuristic.payments});
      rec.h = dev.normalized;
      rec.h_fallback = dev.normalization_fallback;
    }
    StabilityOptions lp_options;
    rec.pspe = solve_stability_lp(build_stability_lp(game, opt.partition, lp_options), false).feasible;
    if (options.strict_census) {
      rec.strict_pspe = find_pspe(game, Objective::kFeasibility, options.guards, false).outcome.has_value();
    }
    if (options.revenue) {
      // Range over every optimal partition, not only the canonical one.
      const Rational welfare = opt.profile.welfare;
      const auto most = find_pspe(game, Objective::kMaxPay, options.guards, false);
      const auto least = find_pspe(game, Objective::kMinPay, options.guards, false);
      if (most.outcome && least.outcome) {
        rec.revenue_min = (welfare - sum(most.outcome->payments)) / game.k();
        rec.revenue_max = (welfare - sum(least.outcome->payments)) / game.k();
      }
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<const ExperimentRecord*> sorted_by_id(const std::vector<ExperimentRecord>& records) {
  std::vector<const ExperimentRecord*> out;
  for (const auto& r : records) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(),
                   [](const ExperimentRecord* a, const ExperimentRecord* b) { return a->id < b->id; });
  return out;
}

std::string alpha_label(const std::optional<double>& alpha) {
  if (!alpha) return "rand";
  std::ostringstream out;
  out << *alpha;
  return out.str();
}

}  // namespace

std::vector<ExperimentRecord> run_study(const std::vector<Instance>& instances,
                                        const StudyOptions& options) {
  std::vector<ExperimentRecord> records(instances.size());
  const int threads = std::max(1, options.threads);
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next++; i < instances.size(); i = next++) {
      records[i] = study_one(instances[i], options);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  std::stable_sort(records.begin(), records.end(),
                   [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.id < b.id; });
  return records;
}

StudySummary summarize(const std::vector<ExperimentRecord>& records) {
  StudySummary s;
  s.instances = static_cast<int>(records.size());
  int ok = 0, balanced = 0, zero = 0, small = 0, in_range = 0;
  const Rational small_threshold(1, 20);
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++s.errors;
      continue;
    }
    ++ok;
    balanced += r.almost_balanced;
    zero += r.h == 0;
    small += r.h <= small_threshold;
    if (r.pspe) {
      ++s.pspe_found;
    } else {
      ++s.lp_infeasible;
    }
    if (r.strict_pspe && *r.strict_pspe) ++s.strict_pspe_found;
    if (r.revenue_min && r.revenue_max) {
      ++s.revenue_records;
      in_range += *r.revenue_min <= r.r0 && r.r0 <= *r.revenue_max;
    }
  }
  if (ok > 0) {
    s.almost_balanced = static_cast<double>(balanced) / ok;
    s.h_zero = static_cast<double>(zero) / ok;
    s.h_small = static_cast<double>(small) / ok;
    s.stable_fraction = static_cast<double>(s.pspe_found) / ok;
  }
  if (s.revenue_records > 0) s.r0_in_range = static_cast<double>(in_range) / s.revenue_records;
  return s;
}

std::string stability_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "id,n,types,W,d,delta,h,pspe,delta_pq,h_pq,error\n";
  for (const ExperimentRecord* r : sorted_by_id(records)) {
    out << r->id << ',' << r->n << ',' << r->types << ',' << r->total_weight << ',' << r->gap << ','
        << to_decimal(r->delta) << ',' << to_decimal(r->h) << ',' << (r->pspe ? 1 : 0) << ','
        << to_string(r->delta) << ',' << to_string(r->h) << ',' << csv_field(r->error) << '\n';
  }
  return out.str();
}

std::string survival_csv(const std::vector<ExperimentRecord>& records) {
  struct Stratum {
    std::string name;
    int lo, hi;
  };
  const std::vector<Stratum> strata{{"all", 0, 1 << 30}, {"d=0", 0, 0}, {"d=1", 1, 1},
                                    {"d=2", 2, 2},       {"d>=3", 3, 1 << 30}};
  std::ostringstream out;
  out << "h_threshold,fraction,d_stratum\n";
  for (const auto& stratum : strata) {
    std::vector<const ExperimentRecord*> members;
    for (const auto& r : records) {
      if (r.error.empty() && r.gap >= stratum.lo && r.gap <= stratum.hi) members.push_back(&r);
    }
    for (int step = 0; step <= 50; ++step) {
      const Rational threshold(step, 100);
      int below = 0;
      for (const auto* r : members) below += r->h <= threshold;
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.2f", step / 100.0);
      const long size = std::max<long>(static_cast<long>(members.size()), 1);
      out << buffer << ',' << to_decimal(ratio(below, size)) << ',' << stratum.name << '\n';
    }
  }
  return out.str();
}

std::string revenue_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "id,alpha_or_rand,r_min,r_max,r0,r_min_pq,r_max_pq,r0_pq\n";
  for (const ExperimentRecord* r : sorted_by_id(records)) {
    if (!r->revenue_min || !r->revenue_max) continue;
    out << r->id << ',' << alpha_label(r->alpha) << ',' << to_decimal(*r->revenue_min) << ','
        << to_decimal(*r->revenue_max) << ',' << to_decimal(r->r0) << ',' << to_string(*r->revenue_min)
        << ',' << to_string(*r->revenue_max) << ',' << to_string(r->r0) << '\n';
  }
  return out.str();
}

}  // namespace market_eq
