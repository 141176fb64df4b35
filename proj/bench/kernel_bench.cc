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

// Serial reference kernels against the OpenMP versions.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "ssreg/kernels.h"
#include "ssreg/prg.h"

namespace {

std::vector<std::uint64_t> RandomWords(std::size_t n, std::uint64_t seed) {
  ssreg::Prg prg(ssreg::DeriveSeed(seed, "bench"));
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = prg.NextU64();
  return v;
}

template <bool kParallel>
void BM_MatMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = RandomWords(n * n, 1);
  const auto b = RandomWords(n * n, 2);
  std::vector<std::uint64_t> c(n * n);
  for (auto _ : state) {
    if constexpr (kParallel) {
      ssreg::kernels::MatMul(a, b, c, n, n, n);
    } else {
      ssreg::kernels::serial::MatMul(a, b, c, n, n, n);
    }
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <bool kParallel>
void BM_ShiftRight(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = RandomWords(n, 3);
  std::vector<std::uint64_t> out(n);
  for (auto _ : state) {
    if constexpr (kParallel) {
      ssreg::kernels::ShiftRight(a, 20, out);
    } else {
      ssreg::kernels::serial::ShiftRight(a, 20, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool kParallel>
void BM_Add(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = RandomWords(n, 4);
  const auto b = RandomWords(n, 5);
  std::vector<std::uint64_t> out(n);
  for (auto _ : state) {
    if constexpr (kParallel) {
      ssreg::kernels::Add(a, b, out);
    } else {
      ssreg::kernels::serial::Add(a, b, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_MatMul<false>)->Name("MatMul/serial")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_MatMul<true>)->Name("MatMul/openmp")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_ShiftRight<false>)->Name("ShiftRight/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_ShiftRight<true>)->Name("ShiftRight/openmp")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_Add<false>)->Name("Add/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_Add<true>)->Name("Add/openmp")->Range(1 << 10, 1 << 20);

BENCHMARK_MAIN();
