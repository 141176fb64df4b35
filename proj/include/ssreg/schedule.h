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

#ifndef SSREG_SCHEDULE_H_
#define SSREG_SCHEDULE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ssreg/error.h"
#include "ssreg/prg.h"
#include "ssreg/transport.h"

namespace ssreg {

enum class OwnerPolicy { kSequential, kSeededRandom };
std::string_view OwnerPolicyName(OwnerPolicy p);  // "sequential" / "seeded-random"
OwnerPolicy ParseOwnerPolicy(std::string_view name);

// How TrainingConfig::iterations is counted.
enum class ScheduleUnit { kSteps, kEpochs };
std::string_view ScheduleUnitName(ScheduleUnit u);
ScheduleUnit ParseScheduleUnit(std::string_view name);

// Number of SGD steps: `iterations` itself, or iterations * floor(m / B).
std::size_t StepCount(std::size_t iterations, ScheduleUnit unit,
                      std::size_t samples, std::size_t batch);

struct Batch {
  PartyId owner = 0;
  std::vector<std::size_t> rows;  // owner-local (horizontal) or global rows
  friend bool operator==(const Batch&, const Batch&) = default;
};

struct BatchSchedule {
  std::vector<Batch> batches;

  std::size_t size() const { return batches.size(); }
  std::string Digest() const;  // hex BLAKE2b-256
  std::uint64_t DigestWord() const;
  friend bool operator==(const BatchSchedule&, const BatchSchedule&) = default;
};

// Seeded permutations of [0, m) cut into batches of B; a batch never spans
// two permutations, so rows within a batch are distinct.
class PermutationStream {
 public:
  PermutationStream(std::size_t m, std::uint64_t seed);
  std::vector<std::size_t> Next(std::size_t batch);

 private:
  void Reshuffle();

  std::size_t m_;
  Prg prg_;
  std::vector<std::size_t> perm_;
  std::size_t pos_ = 0;
};

// Vertical schedule: `steps` batches of B global row indices.
BatchSchedule BuildBatchSchedule(std::size_t m, std::size_t batch,
                                 std::size_t steps, std::uint64_t seed);

// Owner of step t among the eligible parties (those able to fill a batch).
PartyId SelectOwner(std::size_t t, const std::vector<PartyId>& eligible,
                    OwnerPolicy policy, std::uint64_t seed);
PartyId SelectOwner(std::size_t t, std::size_t n, OwnerPolicy policy,
                    std::uint64_t seed);

// Horizontal schedule: per step an owner and B rows local to that owner.
BatchSchedule BuildHorizontalSchedule(const std::vector<std::size_t>& party_rows,
                                      std::size_t batch, std::size_t steps,
                                      OwnerPolicy policy, std::uint64_t seed);

// Rewrites owner-local rows to positions in the parties' concatenation.
BatchSchedule ToGlobalRows(const BatchSchedule& schedule,
                           const std::vector<std::size_t>& party_rows);

// Every party broadcasts `value` and compares with what it receives; any
// difference raises `code`.
void AgreeOnValue(Session& s, std::uint64_t value, ErrorCode code,
                  std::string_view what);
// Every party's value, indexed by party.
std::vector<std::uint64_t> AllGather(Session& s, std::uint64_t value);

// Owner-policy handshake: all parties must run the same policy and seed.
void VerifyOwnerPolicy(Session& s, OwnerPolicy policy, std::uint64_t seed);

}  // namespace ssreg

#endif  // SSREG_SCHEDULE_H_
