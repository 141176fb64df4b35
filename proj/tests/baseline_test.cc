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

#include <set>

#include <gtest/gtest.h>

#include "ssreg/baseline.h"
#include "ssreg/dataset.h"
#include "ssreg/schedule.h"
#include "test_util.h"

namespace ssreg {
namespace {

using testing::CodeOf;

Dataset ThreeX(std::size_t m) {
  Dataset d;
  d.x = RealMatrix(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    d.x.data[i] = 0.5 + 1.5 * static_cast<double>(i) / m;
    d.y.push_back(3 * d.x.data[i]);
  }
  return d;
}

PlainConfig Cfg(double alpha) {
  PlainConfig c;
  c.learning_rate = alpha;
  return c;
}

TEST(TrainPlain, LinearConvergesToSlope) {
  const Dataset d = ThreeX(100);
  const PlainModel m = TrainPlain(d.x, d.y, BuildBatchSchedule(100, 5, 200, 1), Cfg(0.1), PlainTask::kLinear);
  EXPECT_NEAR(m.w[0], 3.0, 0.05);
  EXPECT_EQ(m.trace.size(), 200u);
  EXPECT_LT(m.trace.back(), m.trace.front());
}

TEST(TrainPlain, ZeroLearningRateKeepsInit) {
  const Dataset d = ThreeX(20);
  for (PlainTask t : {PlainTask::kLinear}) {
    const PlainModel m = TrainPlain(d.x, d.y, BuildBatchSchedule(20, 5, 10, 1), Cfg(0.0), t, {0.25});
    EXPECT_EQ(m.w[0], 0.25);
  }
}

TEST(TrainPlain, TrueAndPolySigmoidAucGap) {
  Dataset d = MakeSeparableDataset(400, 4, 3);
  d.x = Normalize(d.x, d.y, Task::kLogistic).x;
  const BatchSchedule s = BuildBatchSchedule(400, 5, 400, 2);
  const auto wt = TrainPlain(d.x, d.y, s, Cfg(0.5), PlainTask::kLogisticTrue).w;
  const auto wp = TrainPlain(d.x, d.y, s, Cfg(0.5), PlainTask::kLogisticPoly).w;
  const double at = Auc(LinearScores(d.x, wt), d.y), ap = Auc(LinearScores(d.x, wp), d.y);
  EXPECT_GE(at, 0.95);
  EXPECT_LE(std::abs(at - ap), 0.02);
}

TEST(TrainPlain, Errors) {
  Dataset d = ThreeX(20);
  EXPECT_EQ(CodeOf([&] { TrainPlain(d.x, d.y, BuildBatchSchedule(20, 5, 5, 1), Cfg(0.1), PlainTask::kLogisticTrue); }),
            ErrorCode::kLabelDomainError);
  EXPECT_EQ(CodeOf([&] { TrainPlain(d.x, d.y, BuildBatchSchedule(20, 5, 200, 1), Cfg(1e6), PlainTask::kLinear); }),
            ErrorCode::kNonFiniteLoss);
}

TEST(TrainPlain, QuantizedStaysClose) {
  Dataset d = MakeLinearDataset(100, 3, 4, 0.1);
  const BatchSchedule s = BuildBatchSchedule(100, 5, 50, 3);
  PlainConfig q = Cfg(0.1);
  q.quantize = FixedPointConfig{};
  const auto a = TrainPlain(d.x, d.y, s, Cfg(0.1), PlainTask::kLinear).w;
  const auto b = TrainPlain(d.x, d.y, s, q, PlainTask::kLinear).w;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-4);
}

TEST(Gradient, MatchesFiniteDifferences) {
  Dataset d = MakeSeparableDataset(60, 3, 5);
  d.x = Normalize(d.x, d.y, Task::kLogistic).x;
  const std::vector<double> w{0.3, -0.2, 0.5};
  const SigmoidCoefficients q;
  for (PlainTask t : {PlainTask::kLinear, PlainTask::kLogisticTrue, PlainTask::kLogisticPoly}) {
    const auto g = PlainGradient(d.x, d.y, w, {}, t, q);
    for (std::size_t c = 0; c < w.size(); ++c) {
      const double h = 1e-6;
      auto wp = w, wm = w;
      wp[c] += h;
      wm[c] -= h;
      const double numeric =
          (SurrogateLoss(d.x, d.y, wp, t, q) - SurrogateLoss(d.x, d.y, wm, t, q)) / (2 * h);
      EXPECT_NEAR(g[c] / 60.0, numeric, 1e-6) << PlainTaskName(t) << " coordinate " << c;
    }
  }
}

TEST(Link, Values) {
  const SigmoidCoefficients q;
  EXPECT_EQ(PlainLink(1.5, PlainTask::kLinear, q), 1.5);
  EXPECT_NEAR(PlainLink(0.0, PlainTask::kLogisticTrue, q), 0.5, 1e-15);
  EXPECT_NEAR(PlainLink(1.0, PlainTask::kLogisticPoly, q), 0.701, 1e-12);
  EXPECT_NEAR(PlainLink(-1.0, PlainTask::kLogisticPoly, q), 0.299, 1e-12);
  EXPECT_NEAR(Sigmoid(-800), 0.0, 1e-300);
  EXPECT_EQ(Sigmoid(800), 1.0);
}

TEST(Rmse, Values) {
  EXPECT_EQ(Rmse({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_NEAR(Rmse({0, 0}, {3, 4}), 2.5 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(CodeOf([] { Rmse({}, {}); }), ErrorCode::kEmptyInput);
}

TEST(Auc, Values) {
  EXPECT_EQ(Auc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}), 1.0);
  EXPECT_EQ(Auc({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}), 0.5);
  EXPECT_EQ(Auc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}), 0.0);
  EXPECT_EQ(CodeOf([] { Auc({0.1, 0.2}, {1, 1}); }), ErrorCode::kSingleClassError);
  Prg prg(6);
  std::vector<double> s, l;
  for (int i = 0; i < 10000; ++i) {
    s.push_back(prg.NextDouble());
    l.push_back(i % 2);
  }
  EXPECT_NEAR(Auc(s, l), 0.5, 0.02);
}

TEST(Auc, MatchesPairCountingOracle) {
  Prg prg(7);
  std::vector<double> s, l;
  for (int i = 0; i < 300; ++i) {
    s.push_back(std::floor(prg.NextDouble() * 20));  // plenty of ties
    l.push_back(prg.Uniform(2));
  }
  double wins = 0, pairs = 0;
  for (int i = 0; i < 300; ++i)
    for (int j = 0; j < 300; ++j)
      if (l[i] == 1 && l[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1 : s[i] == s[j] ? 0.5 : 0;
      }
  EXPECT_NEAR(Auc(s, l), wins / pairs, 1e-12);
}

TEST(KFold, Properties) {
  const auto folds = KFold(10, 5, 1);
  ASSERT_EQ(folds.size(), 5u);
  for (const auto& f : folds) EXPECT_EQ(f.size(), 2u);
  const auto big = KFold(103, 5, 2);
  std::set<std::size_t> all;
  std::size_t total = 0;
  for (const auto& f : big) {
    EXPECT_TRUE(f.size() == 20 || f.size() == 21);
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
    all.insert(f.begin(), f.end());
    total += f.size();
  }
  EXPECT_EQ(total, 103u);
  EXPECT_EQ(all.size(), 103u);
  EXPECT_EQ(*all.rbegin(), 102u);
  EXPECT_EQ(KFold(103, 5, 2), big);
  EXPECT_NE(KFold(103, 5, 3), big);
  EXPECT_EQ(CodeOf([] { KFold(4, 5, 1); }), ErrorCode::kTooFewSamples);
}

TEST(MinMax, Scaling) {
  const RealMatrix x(3, 2, {2, 7, 4, 7, 6, 7});
  const MinMaxScaler s = MinMaxScaler::Fit(x, {}, false);
  EXPECT_EQ(s.Transform(x), RealMatrix(3, 2, {0, 0, 0.5, 0, 1, 0}));
  const RealMatrix once = s.Transform(x);
  EXPECT_EQ(s.Transform(x), once);
  const NormalizedData lin = Normalize(x, {10, 20, 30}, Task::kLinear);
  EXPECT_EQ(lin.y, std::vector<double>({0, 0.5, 1}));
  const NormalizedData log = Normalize(x, {0, 1, 1}, Task::kLogistic);
  EXPECT_EQ(log.y, std::vector<double>({0, 1, 1}));
}

}  // namespace
}  // namespace ssreg
