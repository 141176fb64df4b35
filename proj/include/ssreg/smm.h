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

#ifndef SSREG_SMM_H_
#define SSREG_SMM_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ssreg/prg.h"
#include "ssreg/ring.h"
#include "ssreg/transport.h"

namespace ssreg {

// Two-party secure matrix multiplication. Party A holds X (x by y), party B
// holds Y (y by z); afterwards A holds M and B holds N with M + N = X*Y in
// the ring. Outputs are raw: with f-bit inputs they carry 2f fractional bits
// and the caller truncates once it has summed everything it needs.
enum class SmmVariant {
  kTrustedInitializer,  // SMM-I, Beaver triples from an offline dealer
  kNoInitializer,       // SMM-II, bounded leakage, no dealer
};

std::string_view SmmVariantName(SmmVariant v);  // "TI" / "OTI"
SmmVariant ParseSmmVariant(std::string_view name);

enum class SmmRole { kA, kB };

struct MatMulDims {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
  friend bool operator==(const MatMulDims&, const MatMulDims&) = default;
};

// Beaver triple with both parties' halves. U = U1 + U2, V = V1 + V2 and
// W = W1 + W2 = U * V exactly in the ring.
struct BeaverTriple {
  RingMatrix u1, u2, v1, v2, w1, w2;

  MatMulDims dims() const { return {u1.rows(), u1.cols(), v1.cols()}; }
  RingMatrix U() const { return MatAdd(u1, u2); }
  RingMatrix V() const { return MatAdd(v1, v2); }
  RingMatrix W() const { return MatAdd(w1, w2); }
  friend bool operator==(const BeaverTriple&, const BeaverTriple&) = default;
};

struct TripleHalf {
  RingMatrix u, v, w;
};

TripleHalf HalfOf(const BeaverTriple& t, SmmRole role);

BeaverTriple GenerateTriple(MatMulDims dims, Prg& prg);
// Dealer step with caller-chosen factors; only the split is random.
BeaverTriple TripleFromFactors(const RingMatrix& u, const RingMatrix& v,
                               Prg& prg);

// "SMM1TRPL", version u16 LE, count u32 LE, then per triple the six halves
// (U1 U2 V1 V2 W1 W2) in RingMatrix serialization.
inline constexpr std::uint16_t kTripleFileVersion = 1;
std::vector<std::uint8_t> EncodeTriples(const std::vector<BeaverTriple>& ts);
std::vector<BeaverTriple> DecodeTriples(std::span<const std::uint8_t> bytes);
void WriteTripleFile(const std::filesystem::path& path,
                     const std::vector<BeaverTriple>& triples);
std::vector<BeaverTriple> ReadTripleFile(const std::filesystem::path& path);

// Source of one fresh triple per SMM-I call between A-party a and B-party b.
// Both parties of a pair draw the same sequence in the same order.
class TripleSource {
 public:
  virtual ~TripleSource() = default;
  virtual TripleHalf Next(PartyId a, PartyId b, SmmRole role,
                          MatMulDims dims) = 0;
};

struct PlannedTriple {
  PartyId a = 0;
  PartyId b = 0;
  MatMulDims dims;
};

// In-process trusted initializer shared by all party threads. Each ordered
// pair (a, b) gets a deterministic triple sequence derived from the dealer
// seed; every triple is handed out once per role and then discarded.
// Provision() generates ahead of time (offline); otherwise triples are made
// on first request unless online generation is disabled.
class TrustedInitializer final : public TripleSource {
 public:
  explicit TrustedInitializer(std::uint64_t seed, bool allow_online = true);

  TripleHalf Next(PartyId a, PartyId b, SmmRole role,
                  MatMulDims dims) override;
  void Provision(const std::vector<PlannedTriple>& plan);
  // Generates the whole plan as per-pair triple lists without consuming.
  std::map<std::pair<PartyId, PartyId>, std::vector<BeaverTriple>> Export(
      const std::vector<PlannedTriple>& plan);

  double generation_seconds() const;
  std::size_t generated() const;

 private:
  struct PairState {
    std::deque<BeaverTriple> queue;
    std::size_t front_index = 0;
    std::size_t taken_a = 0;
    std::size_t taken_b = 0;
    std::size_t generated = 0;
  };

  BeaverTriple Make(PartyId a, PartyId b, std::size_t index, MatMulDims dims);

  std::uint64_t seed_;
  bool allow_online_;
  mutable std::mutex mu_;
  std::map<std::pair<PartyId, PartyId>, PairState> pairs_;
  double generation_seconds_ = 0;
  std::size_t generated_ = 0;
};

// One party's pre-distributed halves, e.g. loaded from triple files.
class TriplePool final : public TripleSource {
 public:
  explicit TriplePool(PartyId self) : self_(self) {}

  void Add(PartyId a, PartyId b, const BeaverTriple& triple);
  // Loads "<dir>/pair_<a>_<b>.trpl" for every pair this party belongs to.
  void LoadDirectory(const std::filesystem::path& dir, std::size_t n);
  TripleHalf Next(PartyId a, PartyId b, SmmRole role,
                  MatMulDims dims) override;
  std::size_t remaining() const;

 private:
  PartyId self_;
  mutable std::mutex mu_;
  std::map<std::pair<PartyId, PartyId>, std::deque<TripleHalf>> halves_;
};

std::filesystem::path PairTripleFile(const std::filesystem::path& dir,
                                     PartyId a, PartyId b);

class SecureMatMul {
 public:
  virtual ~SecureMatMul() = default;
  // This party holds the left factor x; the peer's right factor has z
  // columns. Returns this party's raw share M.
  virtual RingMatrix MultiplyLeft(Session& s, PartyId peer,
                                  const RingMatrix& x, std::size_t z) = 0;
  // This party holds the right factor y; the peer's left factor has x_rows
  // rows. Returns this party's raw share N.
  virtual RingMatrix MultiplyRight(Session& s, PartyId peer,
                                   const RingMatrix& y,
                                   std::size_t x_rows) = 0;
  virtual SmmVariant variant() const = 0;
};

// SMM-I as canonical Beaver multiplication. Each input is first split by its
// owner (share-distribution frames); D = X - U and E = Y - V are then opened
// (smm-D / smm-E frames) and A additionally adds D*E.
class BeaverMatMul final : public SecureMatMul {
 public:
  BeaverMatMul(TripleSource& triples, std::uint64_t seed)
      : triples_(triples), prg_(seed) {}

  RingMatrix MultiplyLeft(Session& s, PartyId peer, const RingMatrix& x,
                          std::size_t z) override;
  RingMatrix MultiplyRight(Session& s, PartyId peer, const RingMatrix& y,
                           std::size_t x_rows) override;
  SmmVariant variant() const override {
    return SmmVariant::kTrustedInitializer;
  }

 private:
  TripleSource& triples_;
  Prg prg_;
};

// SMM-II. A sends X + X' (smm-D) and X'_e + X'_o (smm-E); B sends Y' - Y
// (smm-D) and Y'_e - Y'_o (smm-E). An odd inner dimension is padded with a
// zero column of X and a zero row of Y.
class MaskedMatMul final : public SecureMatMul {
 public:
  explicit MaskedMatMul(std::uint64_t seed) : prg_(seed) {}

  RingMatrix MultiplyLeft(Session& s, PartyId peer, const RingMatrix& x,
                          std::size_t z) override;
  RingMatrix MultiplyRight(Session& s, PartyId peer, const RingMatrix& y,
                           std::size_t x_rows) override;
  SmmVariant variant() const override { return SmmVariant::kNoInitializer; }

  // Revealed mode: B also sends N (smm-N) and A returns M + N; B returns N.
  RingMatrix RevealLeft(Session& s, PartyId peer, const RingMatrix& x,
                        std::size_t z);
  RingMatrix RevealRight(Session& s, PartyId peer, const RingMatrix& y,
                         std::size_t x_rows);

 private:
  Prg prg_;
};

std::unique_ptr<SecureMatMul> MakeSecureMatMul(SmmVariant variant,
                                               TripleSource* triples,
                                               std::uint64_t seed);

struct SmmOutput {
  RingMatrix m;  // A's share
  RingMatrix n;  // B's share
};

// A complete two-party run over loopback, with both views.
struct SmmRun {
  SmmOutput output;
  Transcript transcript_a;
  Transcript transcript_b;
  TrafficStats traffic_a;
  TrafficStats traffic_b;
};

// One SMM-I invocation with a dedicated triple (dims must match).
SmmRun RunSmm1(const RingMatrix& x, const RingMatrix& y,
               const BeaverTriple& triple, std::uint64_t seed);
// One SMM-I invocation drawing from a triple source (pair 0 -> 1).
SmmRun RunSmm1(const RingMatrix& x, const RingMatrix& y, TripleSource& source,
               std::uint64_t seed);

enum class Smm2Mode { kShared, kRevealed };
// In revealed mode output.m holds M + N and output.n holds N.
SmmRun RunSmm2(const RingMatrix& x, const RingMatrix& y, Smm2Mode mode,
               std::uint64_t seed);

// What one party can compute about the other's input from its own received
// frames. SMM-I profiles are empty.
struct LeakageProfile {
  SmmVariant protocol = SmmVariant::kTrustedInitializer;
  std::optional<RingMatrix> leaked_to_a;  // Y_e - Y_o
  std::optional<RingMatrix> leaked_to_b;  // X_e + X_o
  bool empty() const { return !leaked_to_a && !leaked_to_b; }
};

// Throws kMalformedTranscript if the frames do not form one SMM run.
LeakageProfile ExtractLeakage(SmmVariant protocol, const Transcript& transcript,
                              SmmRole role);

// Simulated received messages for SMM-II built only from the leaked quantity
// and simulator randomness.
struct SimulatedView {
  RingMatrix first;   // X1 (for B) or Y1 (for A)
  RingMatrix second;  // X2 (for B) or Y2 (for A)
};
SimulatedView SimulateViewB(const RingMatrix& x_even_plus_odd,
                            const RingMatrix& first);
SimulatedView SimulateViewB(const RingMatrix& x_even_plus_odd,
                            std::size_t padded_cols, Prg& prg);
SimulatedView SimulateViewA(const RingMatrix& y_even_minus_odd,
                            const RingMatrix& first);
SimulatedView SimulateViewA(const RingMatrix& y_even_minus_odd,
                            std::size_t padded_rows, Prg& prg);

}  // namespace ssreg

#endif  // SSREG_SMM_H_
