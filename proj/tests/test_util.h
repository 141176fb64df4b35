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

#ifndef SSREG_TESTS_TEST_UTIL_H_
#define SSREG_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ssreg/dense.h"
#include "ssreg/error.h"
#include "ssreg/prg.h"
#include "ssreg/ring.h"

namespace ssreg::testing {

inline constexpr double kUlp = 1.0 / (1 << 20);

// Reals drawn uniformly from [lo, hi); test-side generator, not the PRG.
inline RealMatrix RandomReal(std::size_t r, std::size_t c, std::uint64_t seed,
                             double lo = -8, double hi = 8) {
  std::uint64_t s = seed * 0x9e3779b97f4a7c15ULL + 1;
  RealMatrix m(r, c);
  for (auto& v : m.data) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v = lo + (hi - lo) * static_cast<double>(s >> 11) / 9007199254740992.0;
  }
  return m;
}

inline RealMatrix NaiveProduct(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      double acc = 0;
      for (std::size_t k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

inline double MaxAbsDiff(const RealMatrix& a, const RealMatrix& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

// Decodes a ring matrix carrying `bits` fractional bits.
inline RealMatrix DecodeBits(const RingMatrix& m, int bits) {
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i)
    out.data[i] = DecodeWithBits({m.values()[i]}, bits);
  return out;
}

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ssreg::Error";
  return ErrorCode::kIoError;
}

}  // namespace ssreg::testing

#endif  // SSREG_TESTS_TEST_UTIL_H_
