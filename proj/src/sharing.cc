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

#include "ssreg/sharing.h"

#include "ssreg/error.h"

namespace ssreg {

ShareSet Split(const RingMatrix& secret, std::size_t n, Prg& prg) {
  SSREG_ENFORCE(n >= 2, ErrorCode::kInvalidPartyCount,
                "secret sharing needs at least two parties");
  ShareSet set;
  set.shares.reserve(n);
  RingMatrix residual = secret;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    set.shares.push_back(UniformMatrix(secret.rows(), secret.cols(), prg));
    residual = MatSub(residual, set.shares.back());
  }
  set.shares.push_back(std::move(residual));
  return set;
}

RingMatrix Reconstruct(const ShareSet& set) {
  SSREG_ENFORCE(!set.shares.empty(), ErrorCode::kInvalidPartyCount,
                "no shares to reconstruct");
  RingMatrix sum = set.shares.front();
  for (std::size_t i = 1; i < set.shares.size(); ++i) {
    sum = MatAdd(sum, set.shares[i]);
  }
  return sum;
}

RingMatrix LocalLinear(const RingMatrix& share_a, const RingMatrix& share_b,
                       LinearOp op) {
  return op == LinearOp::kAdd ? MatAdd(share_a, share_b)
                              : MatSub(share_a, share_b);
}

}  // namespace ssreg
