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

#ifndef SSREG_KERNELS_H_
#define SSREG_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>

// Row-major wrapping (mod 2^64) kernels. The OpenMP versions split the outer
// loop across threads once the work exceeds kParallelThreshold; the serial
// namespace keeps the plain loops as the reference the tests and the
// benchmark compare against. Both produce bit-identical results.
namespace ssreg::kernels {

inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

// c (n x m) = a (n x k) * b (k x m)
void MatMul(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
            std::span<std::uint64_t> c, std::size_t n, std::size_t k,
            std::size_t m);
void Add(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out);
void Sub(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out);
// Arithmetic right shift of the signed interpretation.
void ShiftRight(std::span<const std::uint64_t> a, int bits,
                std::span<std::uint64_t> out);

// Number of threads the parallel kernels may use.
int MaxThreads();

namespace serial {
void MatMul(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
            std::span<std::uint64_t> c, std::size_t n, std::size_t k,
            std::size_t m);
void Add(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out);
void Sub(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
         std::span<std::uint64_t> out);
void ShiftRight(std::span<const std::uint64_t> a, int bits,
                std::span<std::uint64_t> out);
}  // namespace serial

}  // namespace ssreg::kernels

#endif  // SSREG_KERNELS_H_
