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

#include "ssreg/dense.h"

#include "ssreg/error.h"

namespace ssreg {

RealMatrix SelectRows(const RealMatrix& m,
                      const std::vector<std::size_t>& rows) {
  RealMatrix out(rows.size(), m.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SSREG_ENFORCE(rows[i] < m.rows, ErrorCode::kDimensionMismatch,
                  "row index out of range");
    for (std::size_t c = 0; c < m.cols; ++c) out(i, c) = m(rows[i], c);
  }
  return out;
}

RealMatrix SelectColumns(const RealMatrix& m, std::size_t begin,
                         std::size_t end) {
  SSREG_ENFORCE(begin < end && end <= m.cols, ErrorCode::kDimensionMismatch,
                "bad column range");
  RealMatrix out(m.rows, end - begin);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = m(r, c);
  }
  return out;
}

std::vector<double> SelectEntries(const std::vector<double>& v,
                                  const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) {
    SSREG_ENFORCE(i < v.size(), ErrorCode::kDimensionMismatch,
                  "index out of range");
    out.push_back(v[i]);
  }
  return out;
}

}  // namespace ssreg
