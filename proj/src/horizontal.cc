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

#include <numeric>

#include "engine_util.h"
#include "ssreg/protocols.h"
#include "ssreg/shared_ops.h"
#include "ssreg/sharing.h"

namespace ssreg {

RingMatrix TrainHorizontalParty(Session& s, const PartyData& data,
                                const TrainingConfig& cfg,
                                TripleSource* triples, const EngineHooks* hooks,
                                EngineStats* stats) {
  const std::size_t n = s.num_parties();
  const PartyId self = s.id();
  cfg.Validate(n);
  const FixedPointConfig& fp = cfg.fixed_point;
  const std::size_t d = data.x.cols;
  const std::size_t batch = cfg.batch_size;
  SSREG_ENFORCE(data.y.size() == data.x.rows, ErrorCode::kDimensionMismatch,
                "label count differs from row count");
  internal::CheckLabels(data.y, cfg.task);

  s.SetRound(0);
  AgreeOnValue(s, d, ErrorCode::kDimensionMismatch, "feature dimension");
  SSREG_ENFORCE(d >= 1, ErrorCode::kDimensionMismatch, "no features");
  const auto gathered = AllGather(s, data.x.rows);
  const std::vector<std::size_t> party_rows(gathered.begin(), gathered.end());
  VerifyOwnerPolicy(s, cfg.owner_policy, cfg.seed);
  const BatchSchedule schedule = BuildHorizontalSchedule(
      party_rows, batch,
      StepCount(cfg.iterations, cfg.unit,
                std::accumulate(party_rows.begin(), party_rows.end(),
                                std::size_t{0}),
                batch),
      cfg.owner_policy, cfg.seed);
  AgreeOnValue(s, schedule.DigestWord(), ErrorCode::kHashMismatch,
               "batch schedule");

  RingMatrix x_local;
  RingMatrix y_local;
  if (data.x.rows > 0) {
    x_local = EncodeMatrix(data.x, fp);
    y_local = internal::EncodeColumn(data.y, fp);
  }
  Prg prg(DeriveSeed(cfg.PartySeed(self), "horizontal"));
  auto smm = MakeSecureMatMul(cfg.smm, triples,
                              DeriveSeed(cfg.PartySeed(self), "smm"));
  const auto pairs = OrderedPairs(n);
  const double scale = cfg.learning_rate / static_cast<double>(batch);

  RingMatrix w = RingMatrix::Zeros(d, 1);
  RingMatrix prediction_acc = RingMatrix::Zeros(batch, 1);
  if (stats) {
    stats->steps = schedule.size();
    stats->schedule_digest = ToGlobalRows(schedule, party_rows).Digest();
    stats->step_seconds.reserve(schedule.size());
  }

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    internal::StepTimer timer;
    s.SetRound(static_cast<std::uint32_t>(t + 1));
    const Batch& b = schedule.batches[t];

    // The owner shares its batch; everyone else receives its share.
    RingMatrix xs;
    RingMatrix ys;
    if (self == b.owner) {
      const ShareSet xset = Split(SelectRows(x_local, b.rows), n, prg);
      const ShareSet yset = Split(SelectRows(y_local, b.rows), n, prg);
      for (PartyId p = 0; p < n; ++p) {
        if (p == self) continue;
        s.Send(p, MsgKind::kShareDistribution, xset.shares[p]);
        s.Send(p, MsgKind::kYShare, yset.shares[p]);
      }
      xs = xset.shares[self];
      ys = yset.shares[self];
    } else {
      xs = s.Recv(b.owner, MsgKind::kShareDistribution);
      ys = s.Recv(b.owner, MsgKind::kYShare);
      SSREG_ENFORCE(xs.rows() == batch && xs.cols() == d && ys.rows() == batch &&
                        ys.cols() == 1,
                    ErrorCode::kDimensionMismatch, "batch share shape");
    }

    // Prediction: <X>_j w_j locally, <X>_j w_k through SMM.
    prediction_acc = MatAdd(prediction_acc, MatMulRaw(xs, w));
    for (auto [j, k] : pairs) {
      if (self == j)
        prediction_acc =
            MatAdd(prediction_acc, smm->MultiplyLeft(s, k, xs, 1));
      if (self == k)
        prediction_acc =
            MatAdd(prediction_acc, smm->MultiplyRight(s, j, w, batch));
    }
    RingMatrix prediction = TruncateShares(s, prediction_acc, fp, prg);
    if (cfg.task == Task::kLogistic)
      prediction =
          SigmoidPolyShares(s, *smm, prediction, cfg.sigmoid, fp, prg);
    const RingMatrix err = MatSub(prediction, ys);
    if (hooks && hooks->after_error)
      hooks->after_error(t, self, prediction_acc, err);
    prediction_acc = RingMatrix::Zeros(batch, 1);

    // Gradient: <X>_j^T err_j locally, <X>_j^T err_k through SMM.
    const RingMatrix xt = Transpose(xs);
    RingMatrix grad_acc = MatMulRaw(xt, err);
    for (auto [j, k] : pairs) {
      if (self == j) grad_acc = MatAdd(grad_acc, smm->MultiplyLeft(s, k, xt, 1));
      if (self == k) grad_acc = MatAdd(grad_acc, smm->MultiplyRight(s, j, err, d));
    }
    const RingMatrix grad = TruncateShares(s, grad_acc, fp, prg);
    if (hooks && hooks->after_gradient) hooks->after_gradient(t, self, grad);

    const RingMatrix step =
        TruncateShares(s, ScalePublic(grad, scale, fp), fp, prg, false);
    w = MatSub(w, step);
    if (stats) stats->step_seconds.push_back(timer.Seconds());
  }
  return w;
}

}  // namespace ssreg
