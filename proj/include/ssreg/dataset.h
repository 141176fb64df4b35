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

#ifndef SSREG_DATASET_H_
#define SSREG_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ssreg/dense.h"
#include "ssreg/protocols.h"

namespace ssreg {

struct Dataset {
  RealMatrix x;
  std::vector<double> y;
  std::vector<std::string> feature_names;
  std::string label_name;
  std::string source_digest;  // BLAKE2b of the source bytes, if loaded
};

// Numeric CSV with a header row. Errors name the line and column.
Dataset ParseCsv(std::string_view text, std::string_view label_column);
Dataset LoadCsv(const std::filesystem::path& path,
                std::string_view label_column);
void WriteCsv(const std::filesystem::path& path, const Dataset& data);

// Seeded subset of m rows, original order kept. m >= rows returns a copy.
Dataset Subsample(const Dataset& data, std::size_t m, std::uint64_t seed);

// y = x . w* + noise, features uniform on [0, 1), w* standard normal.
Dataset MakeLinearDataset(std::size_t m, std::size_t d, std::uint64_t seed,
                          double noise = 0.0);
// Two Gaussian clusters with well separated means, labels 0 / 1.
Dataset MakeSeparableDataset(std::size_t m, std::size_t d, std::uint64_t seed,
                             double separation = 3.0);

struct Slice {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Slice&, const Slice&) = default;
};

struct PartitionedDataset {
  Scheme scheme = Scheme::kHorizontal;
  std::vector<Slice> slices;  // row ranges (H) or column ranges (V)
  PartyId label_owner = 0;    // vertical only
  std::string source_digest;
  std::vector<PartyData> parties;
};

// Contiguous split into n parts, equal by default or by `ratios`.
std::vector<Slice> SplitRange(std::size_t total, std::size_t n,
                              const std::vector<double>& ratios = {});

PartitionedDataset Partition(const Dataset& data, Scheme scheme, std::size_t n,
                             const std::vector<double>& ratios = {},
                             PartyId label_owner = 0);
// Inverse of Partition.
Dataset Reassemble(const PartitionedDataset& parts);

}  // namespace ssreg

#endif  // SSREG_DATASET_H_
