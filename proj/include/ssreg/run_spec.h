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

#ifndef SSREG_RUN_SPEC_H_
#define SSREG_RUN_SPEC_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssreg/baseline.h"
#include "ssreg/protocols.h"
#include "ssreg/transport.h"

namespace ssreg {

struct DatasetSpec {
  // Either a CSV path or a synthetic generator ("linear" / "separable").
  std::string path;
  std::string label_column = "y";
  std::string synthetic;
  std::size_t rows = 400;
  std::size_t cols = 8;
  std::uint64_t seed = 1;
  double noise = 0.0;
  std::size_t subsample = 0;  // 0 keeps every row
  bool normalize = true;
  std::vector<double> split_ratios;
};

struct RunSpec {
  Task task = Task::kLinear;
  bool secure = true;
  Scheme scheme = Scheme::kHorizontal;
  PlainTask plain_link = PlainTask::kLogisticTrue;  // plaintext LoRe only
  std::size_t parties = 2;
  TrainingConfig training;
  DatasetSpec dataset;
  std::size_t folds = 5;
  std::uint64_t fold_seed = 1;
  TripleMode triple_mode = TripleMode::kOffline;
  std::string triple_dir;  // per-pair files for process runs
  Roster roster;
  std::chrono::milliseconds timeout{30000};
  std::string output;

  // "Sec-LiRe-TI-H", "LoRe", ...
  std::string ConfigName() const;
  nlohmann::json ToJson() const;
  // Validates against the embedded schema; throws kConfigError.
  static RunSpec FromJson(const nlohmann::json& j);
  // ToJson() without the deployment fields roster, output, timeout and
  // triple directory, which do not change results.
  nlohmann::json CanonicalJson() const;
  // Hex BLAKE2b of the canonical JSON (sorted keys, no whitespace) without
  // the deployment fields roster, output, timeout and triple directory.
  std::string Hash() const;
};

RunSpec LoadRunSpec(const std::filesystem::path& path);
void SaveRunSpec(const std::filesystem::path& path, const RunSpec& spec);

// The 8 secure configurations plus plaintext LiRe and LoRe. Linear ones copy
// `linear`, logistic ones copy `logistic`; only task, mode, SMM variant and
// scheme differ.
std::vector<RunSpec> StandardConfigurations(const RunSpec& linear,
                                            const RunSpec& logistic);

}  // namespace ssreg

#endif  // SSREG_RUN_SPEC_H_
