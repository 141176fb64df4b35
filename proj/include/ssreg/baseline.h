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

#ifndef SSREG_BASELINE_H_
#define SSREG_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ssreg/dense.h"
#include "ssreg/model.h"
#include "ssreg/ring.h"
#include "ssreg/schedule.h"

namespace ssreg {

enum class PlainTask { kLinear, kLogisticTrue, kLogisticPoly };
std::string_view PlainTaskName(PlainTask t);

struct PlainConfig {
  double learning_rate = 0.01;
  SigmoidCoefficients sigmoid;
  // Round features, labels and the per-step constant alpha/|B| onto this
  // fixed-point grid first, as the secure engines see them.
  std::optional<FixedPointConfig> quantize;
  bool record_trace = true;
};

struct PlainModel {
  std::vector<double> w;
  std::vector<double> trace;  // training loss after each step
};

// Mini-batch SGD over the given schedule (global row indices):
// w <- w - (alpha / |B|) * sum_{b in B} (f(x_b . w) - y_b) x_b.
PlainModel TrainPlain(const RealMatrix& x, const std::vector<double>& y,
                      const BatchSchedule& schedule, const PlainConfig& cfg,
                      PlainTask task, std::vector<double> init = {});

// Link applied to x . w: identity, logistic, or the cubic stand-in.
double PlainLink(double z, PlainTask task, const SigmoidCoefficients& q);

// Mean loss whose gradient the task descends: half squared error, logistic
// cross-entropy, or for the cubic link the surrogate P(z) - y z with
// P' = the cubic (its gradient is (cubic(z) - y) x).
double SurrogateLoss(const RealMatrix& x, const std::vector<double>& y,
                     const std::vector<double>& w, PlainTask task,
                     const SigmoidCoefficients& q);

// Summed gradient over `rows` (all rows when empty).
std::vector<double> PlainGradient(const RealMatrix& x,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  const std::vector<std::size_t>& rows,
                                  PlainTask task, const SigmoidCoefficients& q);

// Scores x . w (ranking-equivalent to the logistic output).
std::vector<double> LinearScores(const RealMatrix& x,
                                 const std::vector<double>& w);

double Rmse(const std::vector<double>& predictions,
            const std::vector<double>& labels);
// Mann-Whitney AUC; ties count one half.
double Auc(const std::vector<double>& scores, const std::vector<double>& labels);

// k disjoint folds covering [0, m), sizes within one, deterministic in seed.
std::vector<std::vector<std::size_t>> KFold(std::size_t m, std::size_t k,
                                            std::uint64_t seed);

// Per-column min-max scaling to [0, 1]; constant columns map to 0.
struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;
  bool scale_labels = false;
  double label_min = 0;
  double label_max = 1;

  static MinMaxScaler Fit(const RealMatrix& x, const std::vector<double>& y,
                          bool scale_labels);
  RealMatrix Transform(const RealMatrix& x) const;
  std::vector<double> TransformLabels(const std::vector<double>& y) const;
};

struct NormalizedData {
  RealMatrix x;
  std::vector<double> y;
  MinMaxScaler scaler;
};

// Labels are scaled for the linear task only.
NormalizedData Normalize(const RealMatrix& x, const std::vector<double>& y,
                         Task task);

}  // namespace ssreg

#endif  // SSREG_BASELINE_H_
