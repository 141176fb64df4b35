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

#include "ssreg/schedule.h"

#include <numeric>

namespace ssreg {
namespace {

void PutU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

}  // namespace

std::string_view OwnerPolicyName(OwnerPolicy p) {
  return p == OwnerPolicy::kSequential ? "sequential" : "seeded-random";
}

OwnerPolicy ParseOwnerPolicy(std::string_view name) {
  if (name == "sequential") return OwnerPolicy::kSequential;
  if (name == "seeded-random") return OwnerPolicy::kSeededRandom;
  throw Error(ErrorCode::kConfigError,
              "unknown owner policy '" + std::string(name) + "'");
}

std::string_view ScheduleUnitName(ScheduleUnit u) {
  return u == ScheduleUnit::kSteps ? "steps" : "epochs";
}

ScheduleUnit ParseScheduleUnit(std::string_view name) {
  if (name == "steps") return ScheduleUnit::kSteps;
  if (name == "epochs") return ScheduleUnit::kEpochs;
  throw Error(ErrorCode::kConfigError,
              "unknown schedule unit '" + std::string(name) + "'");
}

std::size_t StepCount(std::size_t iterations, ScheduleUnit unit,
                      std::size_t samples, std::size_t batch) {
  SSREG_ENFORCE(batch >= 1, ErrorCode::kInvalidArgument, "batch size is 0");
  if (unit == ScheduleUnit::kSteps) return iterations;
  return iterations * (samples / batch);
}

std::string BatchSchedule::Digest() const {
  std::vector<std::uint8_t> bytes;
  PutU64(bytes, batches.size());
  for (const auto& b : batches) {
    PutU64(bytes, b.owner);
    PutU64(bytes, b.rows.size());
    for (auto r : b.rows) PutU64(bytes, r);
  }
  return HexDigest(bytes);
}

std::uint64_t BatchSchedule::DigestWord() const {
  return DeriveSeed(0, Digest());
}

PermutationStream::PermutationStream(std::size_t m, std::uint64_t seed)
    : m_(m), prg_(seed), perm_(m) {
  SSREG_ENFORCE(m >= 1, ErrorCode::kEmptyInput, "no rows to sample from");
  Reshuffle();
}

void PermutationStream::Reshuffle() {
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t i = m_; i > 1; --i) {
    const std::size_t j = prg_.Uniform(i);
    std::swap(perm_[i - 1], perm_[j]);
  }
  pos_ = 0;
}

std::vector<std::size_t> PermutationStream::Next(std::size_t batch) {
  SSREG_ENFORCE(batch >= 1, ErrorCode::kInvalidArgument, "batch size is 0");
  SSREG_ENFORCE(batch <= m_, ErrorCode::kBatchTooLarge,
                "batch size " + std::to_string(batch) + " exceeds " +
                    std::to_string(m_) + " rows");
  if (pos_ + batch > m_) Reshuffle();
  std::vector<std::size_t> out(perm_.begin() + pos_,
                               perm_.begin() + pos_ + batch);
  pos_ += batch;
  return out;
}

BatchSchedule BuildBatchSchedule(std::size_t m, std::size_t batch,
                                 std::size_t steps, std::uint64_t seed) {
  SSREG_ENFORCE(batch >= 1, ErrorCode::kInvalidArgument, "batch size is 0");
  SSREG_ENFORCE(batch <= m, ErrorCode::kBatchTooLarge,
                "batch size " + std::to_string(batch) + " exceeds " +
                    std::to_string(m) + " samples");
  PermutationStream stream(m, DeriveSeed(seed, "batches"));
  BatchSchedule s;
  s.batches.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) s.batches.push_back({0, stream.Next(batch)});
  return s;
}

PartyId SelectOwner(std::size_t t, const std::vector<PartyId>& eligible,
                    OwnerPolicy policy, std::uint64_t seed) {
  SSREG_ENFORCE(!eligible.empty(), ErrorCode::kBatchTooLarge,
                "no party holds enough rows for one batch");
  if (policy == OwnerPolicy::kSequential) return eligible[t % eligible.size()];
  Prg prg(DeriveSeed(seed, "owner", t));
  return eligible[prg.Uniform(eligible.size())];
}

PartyId SelectOwner(std::size_t t, std::size_t n, OwnerPolicy policy,
                    std::uint64_t seed) {
  std::vector<PartyId> all(n);
  std::iota(all.begin(), all.end(), PartyId{0});
  return SelectOwner(t, all, policy, seed);
}

BatchSchedule BuildHorizontalSchedule(const std::vector<std::size_t>& party_rows,
                                      std::size_t batch, std::size_t steps,
                                      OwnerPolicy policy, std::uint64_t seed) {
  SSREG_ENFORCE(batch >= 1, ErrorCode::kInvalidArgument, "batch size is 0");
  std::vector<PartyId> eligible;
  std::vector<PermutationStream> streams;
  std::vector<std::size_t> stream_of(party_rows.size(), 0);
  for (PartyId p = 0; p < party_rows.size(); ++p) {
    if (party_rows[p] < batch) continue;
    stream_of[p] = streams.size();
    eligible.push_back(p);
    streams.emplace_back(party_rows[p], DeriveSeed(seed, "rows", p));
  }
  BatchSchedule s;
  s.batches.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const PartyId owner = SelectOwner(t, eligible, policy, seed);
    s.batches.push_back({owner, streams[stream_of[owner]].Next(batch)});
  }
  return s;
}

BatchSchedule ToGlobalRows(const BatchSchedule& schedule,
                           const std::vector<std::size_t>& party_rows) {
  std::vector<std::size_t> offset(party_rows.size(), 0);
  for (std::size_t p = 1; p < party_rows.size(); ++p)
    offset[p] = offset[p - 1] + party_rows[p - 1];
  BatchSchedule out = schedule;
  for (auto& b : out.batches)
    for (auto& r : b.rows) r += offset.at(b.owner);
  return out;
}

std::vector<std::uint64_t> AllGather(Session& s, std::uint64_t value) {
  const std::size_t n = s.num_parties();
  RingMatrix mine(1, 1);
  mine(0, 0) = value;
  for (PartyId p = 0; p < n; ++p)
    if (p != s.id()) s.Send(p, MsgKind::kControl, mine);
  std::vector<std::uint64_t> all(n, value);
  for (PartyId p = 0; p < n; ++p) {
    if (p == s.id()) continue;
    const RingMatrix got = s.Recv(p, MsgKind::kControl);
    SSREG_ENFORCE(got.rows() == 1 && got.cols() == 1,
                  ErrorCode::kDeserializeError, "control frame is not 1x1");
    all[p] = got(0, 0);
  }
  return all;
}

void AgreeOnValue(Session& s, std::uint64_t value, ErrorCode code,
                  std::string_view what) {
  const auto all = AllGather(s, value);
  for (PartyId p = 0; p < all.size(); ++p) {
    SSREG_ENFORCE(all[p] == value, code,
                  std::string(what) + ": party " + std::to_string(p) +
                      " disagrees with party " + std::to_string(s.id()));
  }
}

void VerifyOwnerPolicy(Session& s, OwnerPolicy policy, std::uint64_t seed) {
  AgreeOnValue(s, DeriveSeed(seed, OwnerPolicyName(policy)),
               ErrorCode::kPolicyMismatch, "owner policy");
}

}  // namespace ssreg
