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

#include "ssreg/shared_ops.h"

#include "ssreg/error.h"

namespace ssreg {

RingMatrix TruncateTwoParty(const RingMatrix& share, bool first_holder,
                            const FixedPointConfig& cfg) {
  if (first_holder) return Truncate(share, cfg);
  return MatNeg(Truncate(MatNeg(share), cfg));
}

RingMatrix TruncateShares(Session& s, const RingMatrix& share,
                          const FixedPointConfig& cfg, Prg& prg,
                          bool reshare) {
  const std::size_t n = s.num_parties();
  const PartyId self = s.id();
  RingMatrix held = share;
  if (n > 2 && reshare) {
    if (self >= 2) {
      const RingMatrix r = UniformMatrix(share.rows(), share.cols(), prg);
      s.Send(0, MsgKind::kShareDistribution, MatSub(share, r));
      s.Send(1, MsgKind::kShareDistribution, r);
    } else {
      for (PartyId p = 2; p < n; ++p) {
        const RingMatrix part = s.Recv(p, MsgKind::kShareDistribution);
        SSREG_ENFORCE(part.SameShape(held), ErrorCode::kDimensionMismatch,
                      "reshared block has the wrong shape");
        held = MatAdd(held, part);
      }
    }
  }
  if (self >= 2) return RingMatrix::Zeros(share.rows(), share.cols());
  return TruncateTwoParty(held, self == 0, cfg);
}

RingMatrix ScalePublic(const RingMatrix& share, double c,
                       const FixedPointConfig& cfg) {
  return MatScale(share, Encode(c, cfg));
}

RingMatrix AddPublic(const RingMatrix& share, double c, PartyId self,
                     const FixedPointConfig& cfg) {
  if (self != 0) return share;
  RingMatrix out = share;
  const std::uint64_t e = Encode(c, cfg).raw;
  for (auto& v : out.data()) v += e;
  return out;
}

RingMatrix ElementwiseProduct(const RingMatrix& a, const RingMatrix& b) {
  SSREG_ENFORCE(a.SameShape(b), ErrorCode::kDimensionMismatch,
                "elementwise product of different shapes");
  RingMatrix out = a;
  auto bv = b.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= bv[i];
  return out;
}

std::vector<std::pair<PartyId, PartyId>> OrderedPairs(std::size_t n) {
  std::vector<std::pair<PartyId, PartyId>> out;
  for (PartyId j = 0; j < n; ++j)
    for (PartyId k = 0; k < n; ++k)
      if (j != k) out.emplace_back(j, k);
  return out;
}

std::vector<std::pair<PartyId, PartyId>> UnorderedPairs(std::size_t n) {
  std::vector<std::pair<PartyId, PartyId>> out;
  for (PartyId j = 0; j < n; ++j)
    for (PartyId k = j + 1; k < n; ++k) out.emplace_back(j, k);
  return out;
}

RingMatrix HadamardShares(Session& s, SecureMatMul& smm, const RingMatrix& a,
                          const RingMatrix& b) {
  SSREG_ENFORCE(a.cols() == 1 && a.SameShape(b), ErrorCode::kDimensionMismatch,
                "hadamard: expected equal column vectors");
  RingMatrix acc = ElementwiseProduct(a, b);
  for (auto [j, k] : OrderedPairs(s.num_parties())) {
    if (s.id() == j) acc = MatAdd(acc, smm.MultiplyLeft(s, k, Diagonal(a), 1));
    if (s.id() == k) acc = MatAdd(acc, smm.MultiplyRight(s, j, b, a.rows()));
  }
  return acc;
}

RingMatrix SquareShares(Session& s, SecureMatMul& smm, const RingMatrix& z) {
  SSREG_ENFORCE(z.cols() == 1, ErrorCode::kDimensionMismatch,
                "square: expected a column vector");
  RingMatrix acc = ElementwiseProduct(z, z);
  for (auto [j, k] : UnorderedPairs(s.num_parties())) {
    RingMatrix cross;
    if (s.id() == j) cross = smm.MultiplyLeft(s, k, Diagonal(z), 1);
    if (s.id() == k) cross = smm.MultiplyRight(s, j, z, z.rows());
    if (s.id() == j || s.id() == k)
      acc = MatAdd(acc, MatAdd(cross, cross));
  }
  return acc;
}

RingMatrix SigmoidPolyShares(Session& s, SecureMatMul& smm, const RingMatrix& z,
                             const SigmoidCoefficients& q,
                             const FixedPointConfig& cfg, Prg& prg) {
  const RingMatrix z2 = TruncateShares(s, SquareShares(s, smm, z), cfg, prg);
  const RingMatrix z3 =
      TruncateShares(s, HadamardShares(s, smm, z2, z), cfg, prg);
  RingMatrix acc = ScalePublic(z, q.q1, cfg);
  acc = MatAdd(acc, ScalePublic(z2, q.q2, cfg));
  acc = MatAdd(acc, ScalePublic(z3, q.q3, cfg));
  return AddPublic(TruncateShares(s, acc, cfg, prg), q.q0, s.id(), cfg);
}

std::vector<PlannedTriple> SigmoidTriplePlan(std::size_t n, std::size_t rows) {
  std::vector<PlannedTriple> plan;
  const MatMulDims dims{rows, rows, 1};
  for (auto [j, k] : UnorderedPairs(n)) plan.push_back({j, k, dims});
  for (auto [j, k] : OrderedPairs(n)) plan.push_back({j, k, dims});
  return plan;
}

}  // namespace ssreg
