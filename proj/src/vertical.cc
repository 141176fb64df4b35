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

RingMatrix TrainVerticalParty(Session& s, const PartyData& data,
                              const TrainingConfig& cfg, TripleSource* triples,
                              const EngineHooks* hooks, EngineStats* stats) {
  const std::size_t n = s.num_parties();
  const PartyId self = s.id();
  cfg.Validate(n);
  const FixedPointConfig& fp = cfg.fixed_point;
  const std::size_t batch = cfg.batch_size;
  const std::size_t m = data.x.rows;
  const PartyId label_owner = cfg.label_owner;
  if (self == label_owner) {
    SSREG_ENFORCE(data.y.size() == m, ErrorCode::kSampleCountMismatch,
                  "label count differs from row count");
    internal::CheckLabels(data.y, cfg.task);
  }

  s.SetRound(0);
  AgreeOnValue(s, m, ErrorCode::kSampleCountMismatch, "sample count");
  const auto gathered = AllGather(s, data.x.cols);
  std::vector<std::size_t> dims(gathered.begin(), gathered.end());
  std::vector<std::size_t> offset(n + 1, 0);
  for (PartyId p = 0; p < n; ++p) {
    SSREG_ENFORCE(dims[p] >= 1, ErrorCode::kDimensionMismatch,
                  "party " + std::to_string(p) + " holds no features");
    offset[p + 1] = offset[p] + dims[p];
  }
  const BatchSchedule schedule = BuildBatchSchedule(
      m, batch, StepCount(cfg.iterations, cfg.unit, m, batch), cfg.seed);
  AgreeOnValue(s, schedule.DigestWord(), ErrorCode::kHashMismatch,
               "batch schedule");

  const RingMatrix x_local = EncodeMatrix(data.x, fp);
  RingMatrix y_local;
  if (self == label_owner) y_local = internal::EncodeColumn(data.y, fp);
  Prg prg(DeriveSeed(cfg.PartySeed(self), "vertical"));
  auto smm = MakeSecureMatMul(cfg.smm, triples,
                              DeriveSeed(cfg.PartySeed(self), "smm"));
  const auto pairs = OrderedPairs(n);
  const double scale = cfg.learning_rate / static_cast<double>(batch);

  // Initial model sharing: every block owner splits its (zero) block.
  std::vector<RingMatrix> blocks(n);
  {
    const ShareSet own = Split(RingMatrix::Zeros(dims[self], 1), n, prg);
    for (PartyId p = 0; p < n; ++p)
      if (p != self) s.Send(p, MsgKind::kWShare, own.shares[p]);
    blocks[self] = own.shares[self];
    for (PartyId p = 0; p < n; ++p) {
      if (p == self) continue;
      blocks[p] = s.Recv(p, MsgKind::kWShare);
      SSREG_ENFORCE(blocks[p].rows() == dims[p] && blocks[p].cols() == 1,
                    ErrorCode::kDimensionMismatch, "model share shape");
    }
  }
  // This party's shares of all blocks, stacked in block order.
  RingMatrix w = VStack(blocks);
  auto block_of = [&](const RingMatrix& stacked, PartyId p) {
    return SliceRows(stacked, offset[p], offset[p + 1]);
  };

  RingMatrix prediction_acc = RingMatrix::Zeros(batch, 1);
  if (stats) {
    stats->steps = schedule.size();
    stats->schedule_digest = schedule.Digest();
    stats->step_seconds.reserve(schedule.size());
  }

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    internal::StepTimer timer;
    s.SetRound(static_cast<std::uint32_t>(t + 1));
    const Batch& b = schedule.batches[t];

    RingMatrix ys;
    if (self == label_owner) {
      const ShareSet yset = Split(SelectRows(y_local, b.rows), n, prg);
      for (PartyId p = 0; p < n; ++p)
        if (p != self) s.Send(p, MsgKind::kYShare, yset.shares[p]);
      ys = yset.shares[self];
    } else {
      ys = s.Recv(label_owner, MsgKind::kYShare);
      SSREG_ENFORCE(ys.rows() == batch && ys.cols() == 1,
                    ErrorCode::kDimensionMismatch, "label share shape");
    }
    const RingMatrix xb = SelectRows(x_local, b.rows);

    // Prediction: X^i_B <w_i>_i locally, X^i_B <w_i>_j through SMM.
    prediction_acc = MatAdd(prediction_acc, MatMulRaw(xb, block_of(w, self)));
    for (auto [i, j] : pairs) {
      if (self == i)
        prediction_acc = MatAdd(prediction_acc, smm->MultiplyLeft(s, j, xb, 1));
      if (self == j)
        prediction_acc = MatAdd(prediction_acc,
                                smm->MultiplyRight(s, i, block_of(w, i), batch));
    }
    RingMatrix prediction = TruncateShares(s, prediction_acc, fp, prg);
    if (cfg.task == Task::kLogistic)
      prediction =
          SigmoidPolyShares(s, *smm, prediction, cfg.sigmoid, fp, prg);
    const RingMatrix err = MatSub(prediction, ys);
    if (hooks && hooks->after_error)
      hooks->after_error(t, self, prediction_acc, err);
    prediction_acc = RingMatrix::Zeros(batch, 1);

    // Gradient of block i: (X^i_B)^T <err>_i locally, (X^i_B)^T <err>_j
    // through SMM; party j's output is its share of grad_i.
    std::vector<RingMatrix> grads(n);
    for (PartyId p = 0; p < n; ++p) grads[p] = RingMatrix::Zeros(dims[p], 1);
    const RingMatrix xt = Transpose(xb);
    grads[self] = MatMulRaw(xt, err);
    for (auto [i, j] : pairs) {
      if (self == i) grads[i] = MatAdd(grads[i], smm->MultiplyLeft(s, j, xt, 1));
      if (self == j)
        grads[i] = MatAdd(grads[i], smm->MultiplyRight(s, i, err, dims[i]));
    }
    const RingMatrix grad = TruncateShares(s, VStack(grads), fp, prg);
    if (hooks && hooks->after_gradient) hooks->after_gradient(t, self, grad);

    const RingMatrix step =
        TruncateShares(s, ScalePublic(grad, scale, fp), fp, prg, false);
    w = MatSub(w, step);
    if (stats) stats->step_seconds.push_back(timer.Seconds());
  }

  // Final exchange: every party sends its share of block i to party i.
  s.SetRound(static_cast<std::uint32_t>(schedule.size() + 1));
  for (PartyId p = 0; p < n; ++p)
    if (p != self) s.Send(p, MsgKind::kWShare, block_of(w, p));
  RingMatrix mine = block_of(w, self);
  for (PartyId p = 0; p < n; ++p) {
    if (p == self) continue;
    const RingMatrix part = s.Recv(p, MsgKind::kWShare);
    SSREG_ENFORCE(part.SameShape(mine), ErrorCode::kDimensionMismatch,
                  "final block share shape");
    mine = MatAdd(mine, part);
  }
  return mine;
}

}  // namespace ssreg
