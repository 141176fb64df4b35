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

#ifndef SSREG_PROTOCOLS_H_
#define SSREG_PROTOCOLS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ssreg/dense.h"
#include "ssreg/model.h"
#include "ssreg/ring.h"
#include "ssreg/schedule.h"
#include "ssreg/smm.h"
#include "ssreg/transport.h"

namespace ssreg {

enum class Scheme { kHorizontal, kVertical };
std::string_view SchemeName(Scheme s);  // "H" / "V"
Scheme ParseScheme(std::string_view name);

struct TrainingConfig {
  Task task = Task::kLinear;
  double learning_rate = 0.01;
  std::size_t batch_size = 5;
  std::size_t iterations = 100;
  ScheduleUnit unit = ScheduleUnit::kSteps;
  SmmVariant smm = SmmVariant::kTrustedInitializer;
  SigmoidCoefficients sigmoid;
  FixedPointConfig fixed_point;
  OwnerPolicy owner_policy = OwnerPolicy::kSequential;
  PartyId label_owner = 0;  // vertical only
  std::uint64_t seed = 1;   // public: schedule, owner choice
  // Seeds this party's private randomness (shares, masks). 0 derives it
  // from `seed`, which keeps runs reproducible but is only fit for testing.
  // Left out of the spec hash so each party can hold its own value.
  std::uint64_t private_seed = 0;

  void Validate(std::size_t num_parties) const;
  std::uint64_t PartySeed(PartyId party) const;
};

// A party's local data. Horizontal: some rows, all features, own labels.
// Vertical: all rows, some features; labels only at the label owner.
struct PartyData {
  RealMatrix x;
  std::vector<double> y;
};

// Observation points inside one training step. Called on each party's own
// thread; prediction_acc may be modified (it is cleared right after).
struct EngineHooks {
  std::function<void(std::size_t step, PartyId self, RingMatrix& prediction_acc,
                     const RingMatrix& err)>
      after_error;
  std::function<void(std::size_t step, PartyId self, const RingMatrix& grad)>
      after_gradient;
};

struct EngineStats {
  std::vector<double> step_seconds;
  std::size_t steps = 0;
  std::string schedule_digest;
};

// Horizontal engine. Returns this party's additive share w_i of the model.
RingMatrix TrainHorizontalParty(Session& s, const PartyData& data,
                                const TrainingConfig& cfg,
                                TripleSource* triples,
                                const EngineHooks* hooks = nullptr,
                                EngineStats* stats = nullptr);

// Vertical engine. Returns this party's own reconstructed block w_i.
RingMatrix TrainVerticalParty(Session& s, const PartyData& data,
                              const TrainingConfig& cfg, TripleSource* triples,
                              const EngineHooks* hooks = nullptr,
                              EngineStats* stats = nullptr);

// Schedules exactly as the engines derive them, with global row indices.
BatchSchedule HorizontalSchedule(const std::vector<std::size_t>& party_rows,
                                 const TrainingConfig& cfg);
BatchSchedule VerticalSchedule(std::size_t m, const TrainingConfig& cfg);

// SMM-I triples the engines consume, in consumption order per pair.
std::vector<PlannedTriple> HorizontalTriplePlan(std::size_t n, std::size_t d,
                                                std::size_t batch,
                                                std::size_t steps, Task task);
std::vector<PlannedTriple> VerticalTriplePlan(
    const std::vector<std::size_t>& block_dims, std::size_t batch,
    std::size_t steps, Task task);

enum class TripleMode {
  kOffline,  // provision the whole plan before training
  kOnline,   // dealer generates each triple on first request
};

struct TrainOutcome {
  std::vector<double> w;                   // reconstructed model
  std::vector<RingMatrix> party_outputs;   // w_i shares (H) or blocks (V)
  std::vector<TrafficStats> traffic;
  std::vector<std::string> transcript_digests;
  std::vector<EngineStats> stats;
  BatchSchedule schedule;                  // global rows
  double seconds = 0;                      // training wall time
  double triple_seconds = 0;               // offline generation time
};

// Runs all parties of one engine on threads over loopback transport.
TrainOutcome RunHorizontal(const std::vector<PartyData>& parties,
                           const TrainingConfig& cfg,
                           TripleMode mode = TripleMode::kOffline,
                           const EngineHooks* hooks = nullptr,
                           SessionOptions options = {});
TrainOutcome RunVertical(const std::vector<PartyData>& parties,
                         const TrainingConfig& cfg,
                         TripleMode mode = TripleMode::kOffline,
                         const EngineHooks* hooks = nullptr,
                         SessionOptions options = {});

}  // namespace ssreg

#endif  // SSREG_PROTOCOLS_H_
