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

#ifndef SSREG_RUNNER_H_
#define SSREG_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssreg/baseline.h"
#include "ssreg/dataset.h"
#include "ssreg/run_spec.h"
#include "ssreg/smm.h"
#include "ssreg/transport.h"

namespace ssreg {

enum class MetricKind { kRmse, kAuc };
std::string_view MetricName(MetricKind k);

struct EvalReport {
  std::string config;
  MetricKind metric = MetricKind::kRmse;
  double value = 0;  // mean of folds
  std::vector<double> folds;
  double wall_seconds = 0;  // training only; offline triple time excluded
  double triple_seconds = 0;
  bool offline_triples = false;

  static std::string TsvHeader();
  std::string ToTsv() const;
  static EvalReport FromTsv(const std::string& line);
};

// Aligned plain-text table, one row per report.
std::string FormatTable(const std::vector<EvalReport>& reports);

// Everything derived from the spec before training; identical at every
// party since it depends only on the spec.
struct PreparedRun {
  Dataset data;  // after subsampling and normalization
  MinMaxScaler scaler;
  std::vector<std::vector<std::size_t>> test_rows;
  std::vector<std::vector<std::size_t>> train_rows;
  std::vector<PartitionedDataset> partitions;  // training rows, per fold
};

Dataset LoadSpecDataset(const RunSpec& spec);
PreparedRun PrepareRun(const RunSpec& spec);
// Triples a secure SMM-I run consumes over all folds.
std::vector<PlannedTriple> RunTriplePlan(const RunSpec& spec,
                                         const PreparedRun& prep);

struct PartyFoldRecord {
  std::vector<std::uint64_t> model;  // revealed model, ring words
  std::string model_digest;
  std::string schedule_digest;
  std::size_t steps = 0;
  std::vector<double> step_seconds;
  double seconds = 0;
};

struct PartyRecord {
  PartyId party = 0;
  std::string spec_hash;
  std::vector<PartyFoldRecord> folds;
  TrafficStats traffic;
  std::string transcript_digest;

  nlohmann::json ToJson() const;
  static PartyRecord FromJson(const nlohmann::json& j);
};

// One party's side of a secure cross-validated run: checks the spec hash
// with its peers, then per fold trains, reveals the model to all parties
// (w-share frames) and records it.
PartyRecord RunPartyFolds(Session& s, const RunSpec& spec,
                          const PreparedRun& prep, TripleSource* triples);

struct RunResult {
  EvalReport report;
  nlohmann::json manifest;  // deterministic for fixed seeds
  nlohmann::json timing;    // wall-clock measurements
};

// Checks that all parties agree (kSpecHashMismatch, kHashMismatch) and
// evaluates the revealed models on the held-out folds.
RunResult AssembleSecureRun(const RunSpec& spec, const PreparedRun& prep,
                            const std::vector<PartyRecord>& records,
                            double triple_seconds);
RunResult RunPlainSpec(const RunSpec& spec, const PreparedRun& prep);
// Picks the learning rate with the best cross-validated plaintext metric
// (lowest RMSE, highest AUC; ties keep the earlier entry). Secure logistic
// specs are searched with the cubic link they train with.
double SelectLearningRate(const RunSpec& spec,
                          const std::vector<double>& grid = {0.001, 0.01, 0.1});
// Plaintext in-process, or all secure parties on threads over loopback.
RunResult RunSpecInThreads(const RunSpec& spec);

void WriteRunOutputs(const RunResult& result, const std::filesystem::path& dir);

struct ScalingPoint {
  std::string engine;  // e.g. "Sec-LiRe-TI-H"
  std::size_t m = 0;
  std::size_t steps = 0;
  double seconds = 0;  // online training time, triple generation excluded
};

struct ScalingOptions {
  std::vector<std::size_t> sizes{500, 1000, 2000, 4000};
  std::size_t d = 8;
  std::size_t epochs = 50;
  std::size_t batch = 5;
  SmmVariant smm = SmmVariant::kTrustedInitializer;
  std::uint64_t seed = 1;
};

// Times the four secure engines over growing m; `iterations` counts epochs
// so the work per run grows with m.
std::vector<ScalingPoint> RunScaling(const ScalingOptions& options);
// seconds(m_{i+1}) / seconds(m_i) for consecutive sizes of one engine.
std::vector<double> DoublingRatios(const std::vector<ScalingPoint>& points,
                                   const std::string& engine);

}  // namespace ssreg

#endif  // SSREG_RUNNER_H_
