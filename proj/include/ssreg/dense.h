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

#ifndef SSREG_DENSE_H_
#define SSREG_DENSE_H_

#include <cstddef>
#include <utility>
#include <vector>

namespace ssreg {

// Plain row-major real matrix used by ingestion and the plaintext baseline.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  RealMatrix(std::size_t r, std::size_t c, std::vector<double> d)
      : rows(r), cols(c), data(std::move(d)) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;
};

RealMatrix SelectRows(const RealMatrix& m, const std::vector<std::size_t>& rows);
RealMatrix SelectColumns(const RealMatrix& m, std::size_t begin,
                         std::size_t end);
std::vector<double> SelectEntries(const std::vector<double>& v,
                                  const std::vector<std::size_t>& idx);

}  // namespace ssreg

#endif  // SSREG_DENSE_H_
