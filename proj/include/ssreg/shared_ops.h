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

#ifndef SSREG_SHARED_OPS_H_
#define SSREG_SHARED_OPS_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "ssreg/model.h"
#include "ssreg/prg.h"
#include "ssreg/ring.h"
#include "ssreg/smm.h"
#include "ssreg/transport.h"

// Fixed-point operations on n-party additive shares. Every party calls the
// same function with its own share; SMM calls follow the pair lists below.
namespace ssreg {

// Share-wise truncation of a 2-party sharing: the first holder shifts its
// share, the second shifts the negation and negates back. The result is
// floor or ceil of the exact quotient (exact quotients stay exact) unless
// the shares wrap, which happens with probability about |v| / 2^64.
RingMatrix TruncateTwoParty(const RingMatrix& share, bool first_holder,
                            const FixedPointConfig& cfg);

// Drops f fractional bits of an n-party sharing. With n > 2 the shares of
// parties 2.. are first moved to parties 0 and 1 (share-distribution
// frames); afterwards those parties hold zero. Pass reshare = false when
// only parties 0 and 1 hold nonzero shares already.
RingMatrix TruncateShares(Session& s, const RingMatrix& share,
                          const FixedPointConfig& cfg, Prg& prg,
                          bool reshare = true);

// share * encode(c); the result carries 2f fractional bits.
RingMatrix ScalePublic(const RingMatrix& share, double c,
                       const FixedPointConfig& cfg);
// Party 0 adds encode(c) to every entry.
RingMatrix AddPublic(const RingMatrix& share, double c, PartyId self,
                     const FixedPointConfig& cfg);

RingMatrix ElementwiseProduct(const RingMatrix& a, const RingMatrix& b);

std::vector<std::pair<PartyId, PartyId>> OrderedPairs(std::size_t n);
std::vector<std::pair<PartyId, PartyId>> UnorderedPairs(std::size_t n);

// Shares of a (.) b for shared column vectors, 2f bits. Cross terms go
// through SMM as Diag(a_j) * b_k for every ordered pair (j, k).
RingMatrix HadamardShares(Session& s, SecureMatMul& smm, const RingMatrix& a,
                          const RingMatrix& b);
// Shares of z (.) z, 2f bits; one SMM per unordered pair, doubled locally.
RingMatrix SquareShares(Session& s, SecureMatMul& smm, const RingMatrix& z);

// Shares of q0 + q1 z + q2 z^2 + q3 z^3 with f fractional bits.
RingMatrix SigmoidPolyShares(Session& s, SecureMatMul& smm, const RingMatrix& z,
                             const SigmoidCoefficients& q,
                             const FixedPointConfig& cfg, Prg& prg);

// Triples consumed by SigmoidPolyShares on a column of `rows` entries.
std::vector<PlannedTriple> SigmoidTriplePlan(std::size_t n, std::size_t rows);

}  // namespace ssreg

#endif  // SSREG_SHARED_OPS_H_
