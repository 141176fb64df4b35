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

#include "ssreg/kernels.h"

#include <omp.h>

#include <algorithm>

namespace ssreg::kernels {
namespace serial {

void MatMul(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
            std::span<std::uint64_t> c, std::size_t n, std::size_t k,
            std::size_t m) {
  std::fill(c.begin(), c.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const std::uint64_t aip = a[i * k + p];
      for (std::size_t j = 0; j < m; ++j) c[i * m + j] += aip * b[p * m + j];
    }
  }
}

void Add(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

void Sub(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
}

void ShiftRight(std::span<const std::uint64_t> a, int bits,
                std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(a[i]) >> bits);
  }
}

}  // namespace serial

void MatMul(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
            std::span<std::uint64_t> c, std::size_t n, std::size_t k,
            std::size_t m) {
  const bool parallel = n * k * m >= kParallelThreshold && n > 1;
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    std::uint64_t* ci = c.data() + i * m;
    std::fill(ci, ci + m, 0);
    for (std::size_t p = 0; p < k; ++p) {
      const std::uint64_t aip = a[i * k + p];
      const std::uint64_t* bp = b.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
    }
  }
}

void Add(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out) {
  const auto len = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for simd if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < len; ++i) out[i] = a[i] + b[i];
}

void Sub(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out) {
  const auto len = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for simd if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < len; ++i) out[i] = a[i] - b[i];
}

void ShiftRight(std::span<const std::uint64_t> a, int bits,
                std::span<std::uint64_t> out) {
  const auto len = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for simd if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(a[i]) >> bits);
  }
}

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace ssreg::kernels
