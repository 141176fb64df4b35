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

#include "ssreg/baseline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ssreg/error.h"
#include "ssreg/prg.h"

namespace ssreg {
namespace {

double Dot(const RealMatrix& x, std::size_t row, const std::vector<double>& w) {
  double z = 0;
  for (std::size_t c = 0; c < x.cols; ++c) z += x(row, c) * w[c];
  return z;
}

double Quantized(double v, const std::optional<FixedPointConfig>& fp) {
  return fp ? Decode(Encode(v, *fp), *fp) : v;
}

}  // namespace

std::string_view PlainTaskName(PlainTask t) {
  switch (t) {
    case PlainTask::kLinear: return "linear";
    case PlainTask::kLogisticTrue: return "logistic-true";
    case PlainTask::kLogisticPoly: return "logistic-poly";
  }
  return "?";
}

double PlainLink(double z, PlainTask task, const SigmoidCoefficients& q) {
  switch (task) {
    case PlainTask::kLinear: return z;
    case PlainTask::kLogisticTrue: return Sigmoid(z);
    case PlainTask::kLogisticPoly: return q.Eval(z);
  }
  return z;
}

double SurrogateLoss(const RealMatrix& x, const std::vector<double>& y,
                     const std::vector<double>& w, PlainTask task,
                     const SigmoidCoefficients& q) {
  SSREG_ENFORCE(x.rows >= 1, ErrorCode::kEmptyInput, "no rows");
  double total = 0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double z = Dot(x, r, w);
    switch (task) {
      case PlainTask::kLinear:
        total += 0.5 * (z - y[r]) * (z - y[r]);
        break;
      case PlainTask::kLogisticTrue:
        // log(1 + e^z) - y z, computed stably.
        total += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) -
                 y[r] * z;
        break;
      case PlainTask::kLogisticPoly:
        total += z * (q.q0 + z * (q.q1 / 2 + z * (q.q2 / 3 + z * q.q3 / 4))) -
                 y[r] * z;
        break;
    }
  }
  return total / static_cast<double>(x.rows);
}

std::vector<double> PlainGradient(const RealMatrix& x,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  const std::vector<std::size_t>& rows,
                                  PlainTask task, const SigmoidCoefficients& q) {
  std::vector<double> g(x.cols, 0.0);
  auto add = [&](std::size_t r) {
    const double err = PlainLink(Dot(x, r, w), task, q) - y[r];
    for (std::size_t c = 0; c < x.cols; ++c) g[c] += err * x(r, c);
  };
  if (rows.empty()) {
    for (std::size_t r = 0; r < x.rows; ++r) add(r);
  } else {
    for (std::size_t r : rows) add(r);
  }
  return g;
}

PlainModel TrainPlain(const RealMatrix& x, const std::vector<double>& y,
                      const BatchSchedule& schedule, const PlainConfig& cfg,
                      PlainTask task, std::vector<double> init) {
  SSREG_ENFORCE(x.rows >= 1 && x.cols >= 1, ErrorCode::kEmptyInput,
                "empty training matrix");
  SSREG_ENFORCE(y.size() == x.rows, ErrorCode::kDimensionMismatch,
                "label count differs from row count");
  if (task != PlainTask::kLinear) {
    for (double v : y)
      SSREG_ENFORCE(v == 0.0 || v == 1.0, ErrorCode::kLabelDomainError,
                    "logistic labels must be 0 or 1");
  }
  RealMatrix xq = x;
  std::vector<double> yq = y;
  if (cfg.quantize) {
    for (auto& v : xq.data) v = Quantized(v, cfg.quantize);
    for (auto& v : yq) v = Quantized(v, cfg.quantize);
  }

  PlainModel model;
  model.w = init.empty() ? std::vector<double>(x.cols, 0.0) : std::move(init);
  SSREG_ENFORCE(model.w.size() == x.cols, ErrorCode::kDimensionMismatch,
                "initial model has the wrong length");
  if (cfg.record_trace) model.trace.reserve(schedule.size());
  for (const Batch& b : schedule.batches) {
    SSREG_ENFORCE(!b.rows.empty(), ErrorCode::kEmptyInput, "empty batch");
    for (std::size_t r : b.rows)
      SSREG_ENFORCE(r < x.rows, ErrorCode::kDimensionMismatch,
                    "schedule row " + std::to_string(r) + " out of range");
    const double step = Quantized(
        cfg.learning_rate / static_cast<double>(b.rows.size()), cfg.quantize);
    const auto g = PlainGradient(xq, yq, model.w, b.rows, task, cfg.sigmoid);
    for (std::size_t c = 0; c < x.cols; ++c) {
      model.w[c] -= step * g[c];
      SSREG_ENFORCE(std::isfinite(model.w[c]), ErrorCode::kNonFiniteLoss,
                    "weights diverged");
    }
    if (cfg.record_trace) {
      const double loss = SurrogateLoss(xq, yq, model.w, task, cfg.sigmoid);
      SSREG_ENFORCE(std::isfinite(loss), ErrorCode::kNonFiniteLoss,
                    "loss diverged");
      model.trace.push_back(loss);
    }
  }
  return model;
}

std::vector<double> LinearScores(const RealMatrix& x,
                                 const std::vector<double>& w) {
  SSREG_ENFORCE(w.size() == x.cols, ErrorCode::kDimensionMismatch,
                "model length differs from feature count");
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = Dot(x, r, w);
  return out;
}

double Rmse(const std::vector<double>& predictions,
            const std::vector<double>& labels) {
  SSREG_ENFORCE(!predictions.empty(), ErrorCode::kEmptyInput,
                "rmse of empty input");
  SSREG_ENFORCE(predictions.size() == labels.size(),
                ErrorCode::kDimensionMismatch, "rmse length mismatch");
  double sum = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double e = predictions[i] - labels[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(labels.size()));
}

double Auc(const std::vector<double>& scores,
           const std::vector<double>& labels) {
  SSREG_ENFORCE(!scores.empty(), ErrorCode::kEmptyInput, "auc of empty input");
  SSREG_ENFORCE(scores.size() == labels.size(), ErrorCode::kDimensionMismatch,
                "auc length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + j) + 1.0) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1.0) {
        positive_rank_sum += mid_rank;
        ++positives;
      } else {
        SSREG_ENFORCE(labels[order[t]] == 0.0, ErrorCode::kLabelDomainError,
                      "auc labels must be 0 or 1");
      }
    }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  SSREG_ENFORCE(positives > 0 && negatives > 0, ErrorCode::kSingleClassError,
                "auc needs both classes");
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1) / 2) /
         (p * static_cast<double>(negatives));
}

std::vector<std::vector<std::size_t>> KFold(std::size_t m, std::size_t k,
                                            std::uint64_t seed) {
  SSREG_ENFORCE(k >= 2, ErrorCode::kInvalidArgument, "need at least 2 folds");
  SSREG_ENFORCE(m >= k, ErrorCode::kTooFewSamples,
                std::to_string(m) + " samples for " + std::to_string(k) +
                    " folds");
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Prg prg(DeriveSeed(seed, "kfold"));
  for (std::size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[prg.Uniform(i)]);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t at = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = m / k + (f < m % k ? 1 : 0);
    folds[f].assign(perm.begin() + at, perm.begin() + at + size);
    std::sort(folds[f].begin(), folds[f].end());
    at += size;
  }
  return folds;
}

MinMaxScaler MinMaxScaler::Fit(const RealMatrix& x,
                               const std::vector<double>& y,
                               bool scale_labels) {
  SSREG_ENFORCE(x.rows >= 1, ErrorCode::kEmptyInput, "no rows to fit");
  MinMaxScaler s;
  s.min.assign(x.cols, 0);
  s.max.assign(x.cols, 0);
  for (std::size_t c = 0; c < x.cols; ++c) {
    s.min[c] = s.max[c] = x(0, c);
    for (std::size_t r = 1; r < x.rows; ++r) {
      s.min[c] = std::min(s.min[c], x(r, c));
      s.max[c] = std::max(s.max[c], x(r, c));
    }
  }
  s.scale_labels = scale_labels;
  if (scale_labels && !y.empty()) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    s.label_min = *lo;
    s.label_max = *hi;
  }
  return s;
}

RealMatrix MinMaxScaler::Transform(const RealMatrix& x) const {
  SSREG_ENFORCE(x.cols == min.size(), ErrorCode::kDimensionMismatch,
                "scaler fitted on a different column count");
  RealMatrix out(x.rows, x.cols);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double span = max[c] - min[c];
      out(r, c) = span > 0 ? (x(r, c) - min[c]) / span : 0.0;
    }
  }
  return out;
}

std::vector<double> MinMaxScaler::TransformLabels(
    const std::vector<double>& y) const {
  if (!scale_labels) return y;
  const double span = label_max - label_min;
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = span > 0 ? (y[i] - label_min) / span : 0.0;
  return out;
}

NormalizedData Normalize(const RealMatrix& x, const std::vector<double>& y,
                         Task task) {
  NormalizedData out;
  out.scaler = MinMaxScaler::Fit(x, y, task == Task::kLinear);
  out.x = out.scaler.Transform(x);
  out.y = out.scaler.TransformLabels(y);
  return out;
}

}  // namespace ssreg
