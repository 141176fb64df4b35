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

#ifndef SSREG_SHARING_H_
#define SSREG_SHARING_H_

#include <cstddef>
#include <vector>

#include "ssreg/ring.h"

namespace ssreg {

// The n additive shares of one matrix; shares[i] belongs to party i.
struct ShareSet {
  std::vector<RingMatrix> shares;

  std::size_t n() const { return shares.size(); }
};

// shares[0..n-2] are fresh uniform matrices and shares[n-1] is the residual,
// so any n-1 shares are jointly uniform. Throws kInvalidPartyCount if n < 2.
ShareSet Split(const RingMatrix& secret, std::size_t n, Prg& prg);

// In-ring sum of all shares. Throws kDimensionMismatch on ragged shapes.
RingMatrix Reconstruct(const ShareSet& set);

enum class LinearOp { kAdd, kSub };

// Party-local combination of two shares; summing the results over all parties
// yields A + B or A - B.
RingMatrix LocalLinear(const RingMatrix& share_a, const RingMatrix& share_b,
                       LinearOp op);

}  // namespace ssreg

#endif  // SSREG_SHARING_H_
