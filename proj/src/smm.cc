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

#include "ssreg/smm.h"

#include <chrono>
#include <fstream>
#include <iterator>
#include <string>

#include "ssreg/error.h"

namespace ssreg {
namespace {

constexpr char kTripleMagic[8] = {'S', 'M', 'M', '1', 'T', 'R', 'P', 'L'};

void ExpectShape(const RingMatrix& m, std::size_t rows, std::size_t cols,
                 const char* what) {
  SSREG_ENFORCE(m.rows() == rows && m.cols() == cols,
                ErrorCode::kDimensionMismatch,
                std::string(what) + ": expected " + std::to_string(rows) +
                    "x" + std::to_string(cols) + ", got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

std::string DimsString(MatMulDims d) {
  return std::to_string(d.x) + "x" + std::to_string(d.y) + "x" +
         std::to_string(d.z);
}

// Hands out the two halves of one fixed triple.
class SingleTripleSource final : public TripleSource {
 public:
  explicit SingleTripleSource(const BeaverTriple& t) : triple_(t) {}

  TripleHalf Next(PartyId, PartyId, SmmRole role, MatMulDims dims) override {
    std::lock_guard<std::mutex> lock(mu_);
    bool& used = role == SmmRole::kA ? used_a_ : used_b_;
    SSREG_ENFORCE(!used, ErrorCode::kTripleExhausted,
                  "the single triple was already consumed");
    SSREG_ENFORCE(triple_.dims() == dims, ErrorCode::kDimensionMismatch,
                  "triple is " + DimsString(triple_.dims()) + ", call needs " +
                      DimsString(dims));
    used = true;
    return HalfOf(triple_, role);
  }

 private:
  const BeaverTriple& triple_;
  std::mutex mu_;
  bool used_a_ = false;
  bool used_b_ = false;
};

RingMatrix Twice(const RingMatrix& a) { return MatAdd(a, a); }

}  // namespace

std::string_view SmmVariantName(SmmVariant v) {
  return v == SmmVariant::kTrustedInitializer ? "TI" : "OTI";
}

SmmVariant ParseSmmVariant(std::string_view name) {
  if (name == "TI" || name == "SMM-I" || name == "smm1")
    return SmmVariant::kTrustedInitializer;
  if (name == "OTI" || name == "SMM-II" || name == "smm2")
    return SmmVariant::kNoInitializer;
  throw Error(ErrorCode::kConfigError,
              "unknown SMM variant '" + std::string(name) + "'");
}

TripleHalf HalfOf(const BeaverTriple& t, SmmRole role) {
  if (role == SmmRole::kA) return {t.u1, t.v1, t.w1};
  return {t.u2, t.v2, t.w2};
}

BeaverTriple TripleFromFactors(const RingMatrix& u, const RingMatrix& v,
                               Prg& prg) {
  SSREG_ENFORCE(u.cols() == v.rows(), ErrorCode::kDimensionMismatch,
                "triple factors do not chain");
  const RingMatrix w = MatMulRaw(u, v);
  BeaverTriple t;
  t.u1 = UniformMatrix(u.rows(), u.cols(), prg);
  t.u2 = MatSub(u, t.u1);
  t.v1 = UniformMatrix(v.rows(), v.cols(), prg);
  t.v2 = MatSub(v, t.v1);
  t.w1 = UniformMatrix(w.rows(), w.cols(), prg);
  t.w2 = MatSub(w, t.w1);
  return t;
}

BeaverTriple GenerateTriple(MatMulDims dims, Prg& prg) {
  SSREG_ENFORCE(dims.x >= 1 && dims.y >= 1 && dims.z >= 1,
                ErrorCode::kInvalidArgument, "triple dimensions must be >= 1");
  RingMatrix u = UniformMatrix(dims.x, dims.y, prg);
  RingMatrix v = UniformMatrix(dims.y, dims.z, prg);
  return TripleFromFactors(u, v, prg);
}

std::vector<std::uint8_t> EncodeTriples(const std::vector<BeaverTriple>& ts) {
  std::vector<std::uint8_t> out(std::begin(kTripleMagic),
                                std::end(kTripleMagic));
  out.push_back(kTripleFileVersion & 0xff);
  out.push_back(kTripleFileVersion >> 8);
  const auto count = static_cast<std::uint32_t>(ts.size());
  for (int i = 0; i < 4; ++i) out.push_back((count >> (8 * i)) & 0xff);
  for (const auto& t : ts) {
    for (const RingMatrix* m : {&t.u1, &t.u2, &t.v1, &t.v2, &t.w1, &t.w2})
      AppendSerialized(*m, out);
  }
  return out;
}

std::vector<BeaverTriple> DecodeTriples(std::span<const std::uint8_t> bytes) {
  SSREG_ENFORCE(bytes.size() >= 14 &&
                    std::equal(std::begin(kTripleMagic), std::end(kTripleMagic),
                               bytes.begin()),
                ErrorCode::kDeserializeError, "not a triple file");
  const std::uint16_t version = bytes[8] | (bytes[9] << 8);
  SSREG_ENFORCE(version == kTripleFileVersion, ErrorCode::kDeserializeError,
                "unsupported triple file version " + std::to_string(version));
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i) count |= std::uint32_t{bytes[10 + i]} << (8 * i);
  std::size_t offset = 14;
  std::vector<BeaverTriple> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    BeaverTriple t;
    for (RingMatrix* m : {&t.u1, &t.u2, &t.v1, &t.v2, &t.w1, &t.w2})
      *m = Deserialize(bytes, &offset);
    SSREG_ENFORCE(t.u1.SameShape(t.u2) && t.v1.SameShape(t.v2) &&
                      t.w1.SameShape(t.w2) && t.u1.cols() == t.v1.rows() &&
                      t.w1.rows() == t.u1.rows() && t.w1.cols() == t.v1.cols(),
                  ErrorCode::kDeserializeError,
                  "inconsistent triple shapes at index " + std::to_string(i));
    out.push_back(std::move(t));
  }
  SSREG_ENFORCE(offset == bytes.size(), ErrorCode::kDeserializeError,
                "trailing bytes in triple file");
  return out;
}

void WriteTripleFile(const std::filesystem::path& path,
                     const std::vector<BeaverTriple>& triples) {
  const auto bytes = EncodeTriples(triples);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError,
                "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError,
                "short write to " + path.string());
}

std::vector<BeaverTriple> ReadTripleFile(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return DecodeTriples(bytes);
}

std::filesystem::path PairTripleFile(const std::filesystem::path& dir,
                                     PartyId a, PartyId b) {
  return dir / ("pair_" + std::to_string(a) + "_" + std::to_string(b) +
                ".trpl");
}

TrustedInitializer::TrustedInitializer(std::uint64_t seed, bool allow_online)
    : seed_(seed), allow_online_(allow_online) {}

BeaverTriple TrustedInitializer::Make(PartyId a, PartyId b, std::size_t index,
                                      MatMulDims dims) {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t s = DeriveSeed(seed_, "triple-a", a);
  s = DeriveSeed(s, "triple-b", b);
  Prg prg(DeriveSeed(s, "triple", index));
  BeaverTriple t = GenerateTriple(dims, prg);
  generation_seconds_ += std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  ++generated_;
  return t;
}

TripleHalf TrustedInitializer::Next(PartyId a, PartyId b, SmmRole role,
                                    MatMulDims dims) {
  std::lock_guard<std::mutex> lock(mu_);
  PairState& st = pairs_[{a, b}];
  std::size_t& taken = role == SmmRole::kA ? st.taken_a : st.taken_b;
  const std::size_t index = taken;
  if (index >= st.generated) {
    SSREG_ENFORCE(allow_online_, ErrorCode::kTripleExhausted,
                  "no provisioned triple left for pair (" + std::to_string(a) +
                      ", " + std::to_string(b) + ")");
    st.queue.push_back(Make(a, b, index, dims));
    ++st.generated;
  }
  const BeaverTriple& t = st.queue[index - st.front_index];
  SSREG_ENFORCE(t.dims() == dims, ErrorCode::kDimensionMismatch,
                "triple " + std::to_string(index) + " for pair (" +
                    std::to_string(a) + ", " + std::to_string(b) + ") is " +
                    DimsString(t.dims()) + ", call needs " + DimsString(dims));
  TripleHalf half = HalfOf(t, role);
  ++taken;
  while (!st.queue.empty() && st.taken_a > st.front_index &&
         st.taken_b > st.front_index) {
    st.queue.pop_front();
    ++st.front_index;
  }
  return half;
}

void TrustedInitializer::Provision(const std::vector<PlannedTriple>& plan) {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& p : plan) {
    PairState& st = pairs_[{p.a, p.b}];
    st.queue.push_back(Make(p.a, p.b, st.generated, p.dims));
    ++st.generated;
  }
}

std::map<std::pair<PartyId, PartyId>, std::vector<BeaverTriple>>
TrustedInitializer::Export(const std::vector<PlannedTriple>& plan) {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::pair<PartyId, PartyId>, std::vector<BeaverTriple>> out;
  for (const auto& p : plan) {
    auto& list = out[{p.a, p.b}];
    list.push_back(Make(p.a, p.b, list.size(), p.dims));
  }
  return out;
}

double TrustedInitializer::generation_seconds() const {
  std::lock_guard<std::mutex> lock(mu_);
  return generation_seconds_;
}

std::size_t TrustedInitializer::generated() const {
  std::lock_guard<std::mutex> lock(mu_);
  return generated_;
}

void TriplePool::Add(PartyId a, PartyId b, const BeaverTriple& triple) {
  std::lock_guard<std::mutex> lock(mu_);
  if (self_ == a) halves_[{a, b}].push_back(HalfOf(triple, SmmRole::kA));
  if (self_ == b) halves_[{a, b}].push_back(HalfOf(triple, SmmRole::kB));
}

void TriplePool::LoadDirectory(const std::filesystem::path& dir,
                               std::size_t n) {
  for (PartyId a = 0; a < n; ++a) {
    for (PartyId b = 0; b < n; ++b) {
      if (a == b || (a != self_ && b != self_)) continue;
      const auto path = PairTripleFile(dir, a, b);
      if (!std::filesystem::exists(path)) continue;
      for (const auto& t : ReadTripleFile(path)) Add(a, b, t);
    }
  }
}

TripleHalf TriplePool::Next(PartyId a, PartyId b, SmmRole role,
                            MatMulDims dims) {
  std::lock_guard<std::mutex> lock(mu_);
  SSREG_ENFORCE((role == SmmRole::kA ? a : b) == self_,
                ErrorCode::kInvalidArgument,
                "triple pool belongs to a different party");
  auto it = halves_.find({a, b});
  SSREG_ENFORCE(it != halves_.end() && !it->second.empty(),
                ErrorCode::kTripleExhausted,
                "no triple left for pair (" + std::to_string(a) + ", " +
                    std::to_string(b) + ")");
  TripleHalf half = std::move(it->second.front());
  it->second.pop_front();
  const MatMulDims have{half.u.rows(), half.u.cols(), half.v.cols()};
  SSREG_ENFORCE(have == dims, ErrorCode::kDimensionMismatch,
                "triple is " + DimsString(have) + ", call needs " +
                    DimsString(dims));
  return half;
}

std::size_t TriplePool::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t total = 0;
  for (const auto& [pair, q] : halves_) total += q.size();
  return total;
}

RingMatrix BeaverMatMul::MultiplyLeft(Session& s, PartyId peer,
                                      const RingMatrix& x, std::size_t z) {
  const TripleHalf t =
      triples_.Next(s.id(), peer, SmmRole::kA, {x.rows(), x.cols(), z});
  const RingMatrix x1 = UniformMatrix(x.rows(), x.cols(), prg_);
  s.Send(peer, MsgKind::kShareDistribution, MatSub(x, x1));
  const RingMatrix y1 = s.Recv(peer, MsgKind::kShareDistribution);
  ExpectShape(y1, x.cols(), z, "smm1 share of Y");

  const RingMatrix d1 = MatSub(x1, t.u);
  const RingMatrix e1 = MatSub(y1, t.v);
  s.Send(peer, MsgKind::kSmmD, d1);
  s.Send(peer, MsgKind::kSmmE, e1);
  const RingMatrix d2 = s.Recv(peer, MsgKind::kSmmD);
  const RingMatrix e2 = s.Recv(peer, MsgKind::kSmmE);
  ExpectShape(d2, d1.rows(), d1.cols(), "smm1 D");
  ExpectShape(e2, e1.rows(), e1.cols(), "smm1 E");
  const RingMatrix d = MatAdd(d1, d2);
  const RingMatrix e = MatAdd(e1, e2);

  RingMatrix m = MatAdd(t.w, MatMulRaw(t.u, e));
  m = MatAdd(m, MatMulRaw(d, t.v));
  return MatAdd(m, MatMulRaw(d, e));
}

RingMatrix BeaverMatMul::MultiplyRight(Session& s, PartyId peer,
                                       const RingMatrix& y,
                                       std::size_t x_rows) {
  const TripleHalf t =
      triples_.Next(peer, s.id(), SmmRole::kB, {x_rows, y.rows(), y.cols()});
  const RingMatrix y1 = UniformMatrix(y.rows(), y.cols(), prg_);
  s.Send(peer, MsgKind::kShareDistribution, y1);
  const RingMatrix x2 = s.Recv(peer, MsgKind::kShareDistribution);
  ExpectShape(x2, x_rows, y.rows(), "smm1 share of X");

  const RingMatrix d2 = MatSub(x2, t.u);
  const RingMatrix e2 = MatSub(MatSub(y, y1), t.v);
  s.Send(peer, MsgKind::kSmmD, d2);
  s.Send(peer, MsgKind::kSmmE, e2);
  const RingMatrix d1 = s.Recv(peer, MsgKind::kSmmD);
  const RingMatrix e1 = s.Recv(peer, MsgKind::kSmmE);
  ExpectShape(d1, d2.rows(), d2.cols(), "smm1 D");
  ExpectShape(e1, e2.rows(), e2.cols(), "smm1 E");
  const RingMatrix d = MatAdd(d1, d2);
  const RingMatrix e = MatAdd(e1, e2);

  RingMatrix n = MatAdd(t.w, MatMulRaw(t.u, e));
  return MatAdd(n, MatMulRaw(d, t.v));
}

RingMatrix MaskedMatMul::MultiplyLeft(Session& s, PartyId peer,
                                      const RingMatrix& x, std::size_t z) {
  const RingMatrix xp = x.cols() % 2 ? PadColumns(x, 1) : x;
  const RingMatrix mask = UniformMatrix(xp.rows(), xp.cols(), prg_);
  const RingMatrix mask_odd = OddColumns(mask);
  const RingMatrix x2 = MatAdd(EvenColumns(mask), mask_odd);
  s.Send(peer, MsgKind::kSmmD, MatAdd(xp, mask));
  s.Send(peer, MsgKind::kSmmE, x2);
  const RingMatrix y1 = s.Recv(peer, MsgKind::kSmmD);
  const RingMatrix y2 = s.Recv(peer, MsgKind::kSmmE);
  ExpectShape(y1, xp.cols(), z, "smm2 Y1");
  ExpectShape(y2, xp.cols() / 2, z, "smm2 Y2");

  const RingMatrix m = MatMulRaw(MatAdd(xp, Twice(mask)), y1);
  return MatAdd(m, MatMulRaw(MatAdd(x2, mask_odd), y2));
}

RingMatrix MaskedMatMul::MultiplyRight(Session& s, PartyId peer,
                                       const RingMatrix& y,
                                       std::size_t x_rows) {
  const RingMatrix yp = y.rows() % 2 ? PadRows(y, 1) : y;
  const RingMatrix mask = UniformMatrix(yp.rows(), yp.cols(), prg_);
  const RingMatrix mask_even = EvenRows(mask);
  const RingMatrix y2 = MatSub(mask_even, OddRows(mask));
  s.Send(peer, MsgKind::kSmmD, MatSub(mask, yp));
  s.Send(peer, MsgKind::kSmmE, y2);
  const RingMatrix x1 = s.Recv(peer, MsgKind::kSmmD);
  const RingMatrix x2 = s.Recv(peer, MsgKind::kSmmE);
  ExpectShape(x1, x_rows, yp.rows(), "smm2 X1");
  ExpectShape(x2, x_rows, yp.rows() / 2, "smm2 X2");

  const RingMatrix n = MatMulRaw(x1, MatSub(Twice(yp), mask));
  return MatSub(n, MatMulRaw(x2, MatAdd(y2, mask_even)));
}

RingMatrix MaskedMatMul::RevealLeft(Session& s, PartyId peer,
                                    const RingMatrix& x, std::size_t z) {
  const RingMatrix m = MultiplyLeft(s, peer, x, z);
  const RingMatrix n = s.Recv(peer, MsgKind::kSmmN);
  ExpectShape(n, m.rows(), m.cols(), "smm2 N");
  return MatAdd(m, n);
}

RingMatrix MaskedMatMul::RevealRight(Session& s, PartyId peer,
                                     const RingMatrix& y, std::size_t x_rows) {
  RingMatrix n = MultiplyRight(s, peer, y, x_rows);
  s.Send(peer, MsgKind::kSmmN, n);
  return n;
}

std::unique_ptr<SecureMatMul> MakeSecureMatMul(SmmVariant variant,
                                               TripleSource* triples,
                                               std::uint64_t seed) {
  if (variant == SmmVariant::kNoInitializer)
    return std::make_unique<MaskedMatMul>(seed);
  SSREG_ENFORCE(triples != nullptr, ErrorCode::kInvalidArgument,
                "SMM-I needs a triple source");
  return std::make_unique<BeaverMatMul>(*triples, seed);
}

namespace {

template <typename LeftFn, typename RightFn>
SmmRun RunPair(LeftFn left, RightFn right) {
  SmmRun run;
  RunLoopbackParties(2, [&](Session& s) {
    if (s.id() == 0) {
      run.output.m = left(s);
      run.transcript_a = s.transcript();
      run.traffic_a = s.traffic();
    } else {
      run.output.n = right(s);
      run.transcript_b = s.transcript();
      run.traffic_b = s.traffic();
    }
  });
  return run;
}

}  // namespace

SmmRun RunSmm1(const RingMatrix& x, const RingMatrix& y,
               const BeaverTriple& triple, std::uint64_t seed) {
  SingleTripleSource source(triple);
  return RunSmm1(x, y, source, seed);
}

SmmRun RunSmm1(const RingMatrix& x, const RingMatrix& y, TripleSource& source,
               std::uint64_t seed) {
  SSREG_ENFORCE(x.cols() == y.rows(), ErrorCode::kDimensionMismatch,
                "smm1: inner dimensions differ");
  return RunPair(
      [&](Session& s) {
        BeaverMatMul smm(source, DeriveSeed(seed, "smm-party", 0));
        return smm.MultiplyLeft(s, 1, x, y.cols());
      },
      [&](Session& s) {
        BeaverMatMul smm(source, DeriveSeed(seed, "smm-party", 1));
        return smm.MultiplyRight(s, 0, y, x.rows());
      });
}

SmmRun RunSmm2(const RingMatrix& x, const RingMatrix& y, Smm2Mode mode,
               std::uint64_t seed) {
  SSREG_ENFORCE(x.cols() == y.rows(), ErrorCode::kDimensionMismatch,
                "smm2: inner dimensions differ");
  const bool reveal = mode == Smm2Mode::kRevealed;
  return RunPair(
      [&](Session& s) {
        MaskedMatMul smm(DeriveSeed(seed, "smm-party", 0));
        return reveal ? smm.RevealLeft(s, 1, x, y.cols())
                      : smm.MultiplyLeft(s, 1, x, y.cols());
      },
      [&](Session& s) {
        MaskedMatMul smm(DeriveSeed(seed, "smm-party", 1));
        return reveal ? smm.RevealRight(s, 0, y, x.rows())
                      : smm.MultiplyRight(s, 0, y, x.rows());
      });
}

LeakageProfile ExtractLeakage(SmmVariant protocol, const Transcript& transcript,
                              SmmRole role) {
  LeakageProfile profile;
  profile.protocol = protocol;
  if (protocol == SmmVariant::kTrustedInitializer) return profile;

  const Frame* first = nullptr;
  const Frame* second = nullptr;
  for (const auto& f : transcript.frames) {
    if (f.kind == MsgKind::kSmmD && !first) first = &f;
    if (f.kind == MsgKind::kSmmE && !second) second = &f;
  }
  SSREG_ENFORCE(first && second, ErrorCode::kMalformedTranscript,
                "transcript lacks the smm-D and smm-E frames");
  RingMatrix m1;
  RingMatrix m2;
  try {
    m1 = Deserialize(first->payload);
    m2 = Deserialize(second->payload);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedTranscript, e.what());
  }
  if (role == SmmRole::kB) {
    SSREG_ENFORCE(m1.cols() % 2 == 0 && m2.rows() == m1.rows() &&
                      m2.cols() * 2 == m1.cols(),
                  ErrorCode::kMalformedTranscript,
                  "X1 and X2 shapes are inconsistent");
    profile.leaked_to_b =
        MatSub(MatAdd(EvenColumns(m1), OddColumns(m1)), m2);
  } else {
    SSREG_ENFORCE(m1.rows() % 2 == 0 && m2.cols() == m1.cols() &&
                      m2.rows() * 2 == m1.rows(),
                  ErrorCode::kMalformedTranscript,
                  "Y1 and Y2 shapes are inconsistent");
    profile.leaked_to_a = MatSub(m2, MatSub(EvenRows(m1), OddRows(m1)));
  }
  return profile;
}

SimulatedView SimulateViewB(const RingMatrix& x_even_plus_odd,
                            const RingMatrix& first) {
  ExpectShape(first, x_even_plus_odd.rows(), 2 * x_even_plus_odd.cols(),
              "simulated X1");
  return {first, MatSub(MatAdd(EvenColumns(first), OddColumns(first)),
                        x_even_plus_odd)};
}

SimulatedView SimulateViewB(const RingMatrix& x_even_plus_odd,
                            std::size_t padded_cols, Prg& prg) {
  return SimulateViewB(x_even_plus_odd,
                       UniformMatrix(x_even_plus_odd.rows(), padded_cols, prg));
}

SimulatedView SimulateViewA(const RingMatrix& y_even_minus_odd,
                            const RingMatrix& first) {
  ExpectShape(first, 2 * y_even_minus_odd.rows(), y_even_minus_odd.cols(),
              "simulated Y1");
  return {first, MatAdd(MatSub(EvenRows(first), OddRows(first)),
                        y_even_minus_odd)};
}

SimulatedView SimulateViewA(const RingMatrix& y_even_minus_odd,
                            std::size_t padded_rows, Prg& prg) {
  return SimulateViewA(y_even_minus_odd,
                       UniformMatrix(padded_rows, y_even_minus_odd.cols(), prg));
}

}  // namespace ssreg
