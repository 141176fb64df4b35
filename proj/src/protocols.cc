/*
 * Copyright 2026 The ssreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <numeric>

#include "engine_util.h"
#include "ssreg/protocols.h"
#include "ssreg/shared_ops.h"

namespace ssreg {

std::string_view SchemeName(Scheme s) {
  return s == Scheme::kHorizontal ? "H" : "V";
}

Scheme ParseScheme(std::string_view name) {
  if (name == "H" || name == "horizontal") return Scheme::kHorizontal;
  if (name == "V" || name == "vertical") return Scheme::kVertical;
  throw Error(ErrorCode::kConfigError,
              "unknown partition scheme '" + std::string(name) + "'");
}

void TrainingConfig::Validate(std::size_t num_parties) const {
  SSREG_ENFORCE(num_parties >= 2, ErrorCode::kInvalidPartyCount,
                "training needs at least 2 parties");
  SSREG_ENFORCE(std::isfinite(learning_rate) && learning_rate >= 0,
                ErrorCode::kConfigError, "learning rate must be >= 0");
  SSREG_ENFORCE(batch_size >= 1, ErrorCode::kConfigError,
                "batch size must be >= 1");
  SSREG_ENFORCE(iterations >= 1, ErrorCode::kConfigError,
                "iterations must be >= 1");
  SSREG_ENFORCE(label_owner < num_parties, ErrorCode::kConfigError,
                "label owner " + std::to_string(label_owner) +
                    " is not a party");
  fixed_point.Validate();
}

std::uint64_t TrainingConfig::PartySeed(PartyId party) const {
  const std::uint64_t base =
      private_seed != 0 ? private_seed : DeriveSeed(seed, "private");
  return DeriveSeed(base, "party", party);
}

BatchSchedule HorizontalSchedule(const std::vector<std::size_t>& party_rows,
                                 const TrainingConfig& cfg) {
  const std::size_t m =
      std::accumulate(party_rows.begin(), party_rows.end(), std::size_t{0});
  const BatchSchedule local = BuildHorizontalSchedule(
      party_rows, cfg.batch_size,
      StepCount(cfg.iterations, cfg.unit, m, cfg.batch_size), cfg.owner_policy,
      cfg.seed);
  return ToGlobalRows(local, party_rows);
}

BatchSchedule VerticalSchedule(std::size_t m, const TrainingConfig& cfg) {
  return BuildBatchSchedule(
      m, cfg.batch_size, StepCount(cfg.iterations, cfg.unit, m, cfg.batch_size),
      cfg.seed);
}

std::vector<PlannedTriple> HorizontalTriplePlan(std::size_t n, std::size_t d,
                                                std::size_t batch,
                                                std::size_t steps, Task task) {
  std::vector<PlannedTriple> step_plan;
  for (auto [j, k] : OrderedPairs(n)) step_plan.push_back({j, k, {batch, d, 1}});
  if (task == Task::kLogistic) {
    const auto sig = SigmoidTriplePlan(n, batch);
    step_plan.insert(step_plan.end(), sig.begin(), sig.end());
  }
  for (auto [j, k] : OrderedPairs(n)) step_plan.push_back({j, k, {d, batch, 1}});
  std::vector<PlannedTriple> plan;
  plan.reserve(step_plan.size() * steps);
  for (std::size_t t = 0; t < steps; ++t)
    plan.insert(plan.end(), step_plan.begin(), step_plan.end());
  return plan;
}

std::vector<PlannedTriple> VerticalTriplePlan(
    const std::vector<std::size_t>& block_dims, std::size_t batch,
    std::size_t steps, Task task) {
  const std::size_t n = block_dims.size();
  std::vector<PlannedTriple> step_plan;
  for (auto [i, j] : OrderedPairs(n))
    step_plan.push_back({i, j, {batch, block_dims[i], 1}});
  if (task == Task::kLogistic) {
    const auto sig = SigmoidTriplePlan(n, batch);
    step_plan.insert(step_plan.end(), sig.begin(), sig.end());
  }
  for (auto [i, j] : OrderedPairs(n))
    step_plan.push_back({i, j, {block_dims[i], batch, 1}});
  std::vector<PlannedTriple> plan;
  plan.reserve(step_plan.size() * steps);
  for (std::size_t t = 0; t < steps; ++t)
    plan.insert(plan.end(), step_plan.begin(), step_plan.end());
  return plan;
}

namespace {

template <typename Engine>
void RunParties(const std::vector<PartyData>& parties,
                const TrainingConfig& cfg, TripleSource* triples,
                const EngineHooks* hooks, SessionOptions options, Engine engine,
                TrainOutcome& out) {
  const std::size_t n = parties.size();
  out.party_outputs.assign(n, RingMatrix());
  out.traffic.assign(n, TrafficStats{});
  out.transcript_digests.assign(n, std::string());
  out.stats.assign(n, EngineStats{});
  internal::StepTimer timer;
  RunLoopbackParties(n, [&](Session& s) {
    const PartyId p = s.id();
    out.party_outputs[p] =
        engine(s, parties[p], cfg, triples, hooks, &out.stats[p]);
    out.traffic[p] = s.traffic();
    out.transcript_digests[p] = s.transcript().Digest();
  }, options);
  out.seconds = timer.Seconds();
}

}  // namespace

TrainOutcome RunHorizontal(const std::vector<PartyData>& parties,
                           const TrainingConfig& cfg, TripleMode mode,
                           const EngineHooks* hooks, SessionOptions options) {
  const std::size_t n = parties.size();
  cfg.Validate(n);
  std::vector<std::size_t> rows;
  for (const auto& p : parties) rows.push_back(p.x.rows);
  const std::size_t d = parties[0].x.cols;

  TrainOutcome out;
  out.schedule = HorizontalSchedule(rows, cfg);
  TrustedInitializer dealer(DeriveSeed(cfg.seed, "dealer"),
                            mode == TripleMode::kOnline);
  if (cfg.smm == SmmVariant::kTrustedInitializer &&
      mode == TripleMode::kOffline) {
    dealer.Provision(HorizontalTriplePlan(n, d, cfg.batch_size,
                                          out.schedule.size(), cfg.task));
  }
  RunParties(parties, cfg, &dealer, hooks, options, TrainHorizontalParty, out);
  out.triple_seconds = dealer.generation_seconds();

  RingMatrix sum = RingMatrix::Zeros(d, 1);
  for (const auto& share : out.party_outputs) sum = MatAdd(sum, share);
  for (std::size_t k = 0; k < d; ++k)
    out.w.push_back(Decode(sum.At(k, 0), cfg.fixed_point));
  return out;
}

TrainOutcome RunVertical(const std::vector<PartyData>& parties,
                         const TrainingConfig& cfg, TripleMode mode,
                         const EngineHooks* hooks, SessionOptions options) {
  const std::size_t n = parties.size();
  cfg.Validate(n);
  std::vector<std::size_t> dims;
  for (const auto& p : parties) dims.push_back(p.x.cols);

  TrainOutcome out;
  out.schedule = VerticalSchedule(parties[0].x.rows, cfg);
  TrustedInitializer dealer(DeriveSeed(cfg.seed, "dealer"),
                            mode == TripleMode::kOnline);
  if (cfg.smm == SmmVariant::kTrustedInitializer &&
      mode == TripleMode::kOffline) {
    dealer.Provision(VerticalTriplePlan(dims, cfg.batch_size,
                                        out.schedule.size(), cfg.task));
  }
  RunParties(parties, cfg, &dealer, hooks, options, TrainVerticalParty, out);
  out.triple_seconds = dealer.generation_seconds();

  for (const auto& block : out.party_outputs)
    for (std::size_t k = 0; k < block.rows(); ++k)
      out.w.push_back(Decode(block.At(k, 0), cfg.fixed_point));
  return out;
}

}  // namespace ssreg
