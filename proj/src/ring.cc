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

#include "ssreg/ring.h"

#include <cmath>
#include <string>

#include "ssreg/error.h"
#include "ssreg/kernels.h"
#include "ssreg/prg.h"

namespace ssreg {
namespace {

void RequireSameShape(const RingMatrix& a, const RingMatrix& b,
                      const char* what) {
  SSREG_ENFORCE(a.SameShape(b), ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

void FixedPointConfig::Validate() const {
  SSREG_ENFORCE(fractional_bits > 0 && fractional_bits < kRingBits / 2,
                ErrorCode::kInvalidArgument,
                "fractional bits must lie in (0, 32), got " +
                    std::to_string(fractional_bits));
}

double FixedPointConfig::Scale() const {
  return std::ldexp(1.0, fractional_bits);
}

RingMatrix::RingMatrix(std::size_t rows, std::size_t cols)
    : RingMatrix(rows, cols, std::vector<std::uint64_t>(rows * cols)) {}

RingMatrix::RingMatrix(std::size_t rows, std::size_t cols,
                       std::vector<std::uint64_t> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  SSREG_ENFORCE(rows >= 1 && cols >= 1, ErrorCode::kDimensionMismatch,
                "matrix dimensions must be positive");
  SSREG_ENFORCE(data_.size() == rows * cols, ErrorCode::kDimensionMismatch,
                "data length does not match rows*cols");
}

RingMatrix RingMatrix::Identity(std::size_t n, const FixedPointConfig& cfg) {
  RingMatrix out(n, n);
  const RingElement one = Encode(1.0, cfg);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = one.raw;
  return out;
}

RingElement EncodeWithBits(double v, int fractional_bits) {
  SSREG_ENFORCE(fractional_bits >= 0 && fractional_bits < 63,
                ErrorCode::kInvalidArgument, "bad fractional bit count");
  const double limit = std::ldexp(1.0, 63 - fractional_bits);
  SSREG_ENFORCE(std::isfinite(v) && std::fabs(v) < limit,
                ErrorCode::kMagnitudeOverflow,
                "value " + std::to_string(v) + " outside encodable range");
  // std::round rounds half away from zero.
  const double scaled = std::round(std::ldexp(v, fractional_bits));
  SSREG_ENFORCE(std::fabs(scaled) < 0x1p63, ErrorCode::kMagnitudeOverflow,
                "value " + std::to_string(v) + " outside encodable range");
  return {static_cast<std::uint64_t>(static_cast<std::int64_t>(scaled))};
}

double DecodeWithBits(RingElement e, int fractional_bits) {
  return std::ldexp(static_cast<double>(e.Signed()), -fractional_bits);
}

RingElement Encode(double v, const FixedPointConfig& cfg) {
  return EncodeWithBits(v, cfg.fractional_bits);
}

double Decode(RingElement e, const FixedPointConfig& cfg) {
  return DecodeWithBits(e, cfg.fractional_bits);
}

RingMatrix EncodeMatrix(const RealMatrix& m, const FixedPointConfig& cfg) {
  RingMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    out.data()[i] = Encode(m.data[i], cfg).raw;
  }
  return out;
}

RealMatrix DecodeMatrix(const RingMatrix& m, const FixedPointConfig& cfg) {
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.data[i] = Decode({m.data()[i]}, cfg);
  }
  return out;
}

RingMatrix MatAdd(const RingMatrix& a, const RingMatrix& b) {
  RequireSameShape(a, b, "mat_add");
  RingMatrix out(a.rows(), a.cols());
  kernels::Add(a.data(), b.data(), out.data());
  return out;
}

RingMatrix MatSub(const RingMatrix& a, const RingMatrix& b) {
  RequireSameShape(a, b, "mat_sub");
  RingMatrix out(a.rows(), a.cols());
  kernels::Sub(a.data(), b.data(), out.data());
  return out;
}

RingMatrix MatNeg(const RingMatrix& a) {
  return MatSub(RingMatrix::Zeros(a.rows(), a.cols()), a);
}

RingMatrix MatMulRaw(const RingMatrix& a, const RingMatrix& b) {
  SSREG_ENFORCE(a.cols() == b.rows(), ErrorCode::kDimensionMismatch,
                "mat_mul: inner dimensions " + std::to_string(a.cols()) +
                    " and " + std::to_string(b.rows()));
  RingMatrix out(a.rows(), b.cols());
  kernels::MatMul(a.data(), b.data(), out.data(), a.rows(), a.cols(),
                  b.cols());
  return out;
}

RingMatrix MatScale(const RingMatrix& a, RingElement c) {
  RingMatrix out = a;
  for (auto& v : out.data()) v *= c.raw;
  return out;
}

RingMatrix Truncate(const RingMatrix& a, const FixedPointConfig& cfg) {
  RingMatrix out(a.rows(), a.cols());
  kernels::ShiftRight(a.data(), cfg.fractional_bits, out.data());
  return out;
}

RingMatrix Transpose(const RingMatrix& a) {
  RingMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

RingMatrix Diagonal(const RingMatrix& v) {
  SSREG_ENFORCE(v.cols() == 1, ErrorCode::kDimensionMismatch,
                "diagonal embedding expects a column vector");
  RingMatrix out(v.rows(), v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) out(i, i) = v(i, 0);
  return out;
}

namespace {

RingMatrix StrideColumns(const RingMatrix& a, std::size_t first) {
  const std::size_t count = (a.cols() - first + 1) / 2;
  SSREG_ENFORCE(count >= 1, ErrorCode::kDimensionMismatch,
                "not enough columns to split");
  RingMatrix out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < count; ++c) out(r, c) = a(r, first + 2 * c);
  }
  return out;
}

RingMatrix StrideRows(const RingMatrix& a, std::size_t first) {
  const std::size_t count = (a.rows() - first + 1) / 2;
  SSREG_ENFORCE(count >= 1, ErrorCode::kDimensionMismatch,
                "not enough rows to split");
  RingMatrix out(count, a.cols());
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(first + 2 * r, c);
  }
  return out;
}

}  // namespace

RingMatrix EvenColumns(const RingMatrix& a) { return StrideColumns(a, 0); }
RingMatrix OddColumns(const RingMatrix& a) { return StrideColumns(a, 1); }
RingMatrix EvenRows(const RingMatrix& a) { return StrideRows(a, 0); }
RingMatrix OddRows(const RingMatrix& a) { return StrideRows(a, 1); }

RingMatrix PadColumns(const RingMatrix& a, std::size_t extra) {
  RingMatrix out(a.rows(), a.cols() + extra);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  }
  return out;
}

RingMatrix PadRows(const RingMatrix& a, std::size_t extra) {
  RingMatrix out(a.rows() + extra, a.cols());
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  return out;
}

RingMatrix SelectRows(const RingMatrix& a, std::span<const std::size_t> rows) {
  RingMatrix out(rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SSREG_ENFORCE(rows[i] < a.rows(), ErrorCode::kDimensionMismatch,
                  "row index out of range");
    for (std::size_t c = 0; c < a.cols(); ++c) out(i, c) = a(rows[i], c);
  }
  return out;
}

RingMatrix SliceRows(const RingMatrix& a, std::size_t begin, std::size_t end) {
  SSREG_ENFORCE(begin < end && end <= a.rows(), ErrorCode::kDimensionMismatch,
                "bad row slice");
  RingMatrix out(end - begin, a.cols());
  std::copy(a.data().begin() + begin * a.cols(),
            a.data().begin() + end * a.cols(), out.data().begin());
  return out;
}

RingMatrix VStack(const std::vector<RingMatrix>& blocks) {
  SSREG_ENFORCE(!blocks.empty(), ErrorCode::kDimensionMismatch,
                "nothing to stack");
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    SSREG_ENFORCE(b.cols() == blocks.front().cols(),
                  ErrorCode::kDimensionMismatch, "vstack column mismatch");
    rows += b.rows();
  }
  std::vector<std::uint64_t> data;
  data.reserve(rows * blocks.front().cols());
  for (const auto& b : blocks) {
    data.insert(data.end(), b.data().begin(), b.data().end());
  }
  return RingMatrix(rows, blocks.front().cols(), std::move(data));
}

RingMatrix UniformMatrix(std::size_t rows, std::size_t cols,
                         std::uint64_t seed) {
  Prg prg(seed);
  return UniformMatrix(rows, cols, prg);
}

RingMatrix UniformMatrix(std::size_t rows, std::size_t cols, Prg& prg) {
  RingMatrix out(rows, cols);
  prg.Fill(out.data());
  return out;
}

namespace {

void PutLe(std::uint64_t v, int bytes, std::vector<std::uint8_t>& out) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

std::uint64_t GetLe(std::span<const std::uint8_t> bytes, std::size_t at,
                    int width) {
  std::uint64_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | bytes[at + i];
  return v;
}

}  // namespace

std::size_t SerializedSize(const RingMatrix& m) { return 8 + 8 * m.size(); }

void AppendSerialized(const RingMatrix& m, std::vector<std::uint8_t>& out) {
  out.reserve(out.size() + SerializedSize(m));
  PutLe(m.rows(), 4, out);
  PutLe(m.cols(), 4, out);
  for (std::uint64_t v : m.data()) PutLe(v, 8, out);
}

std::vector<std::uint8_t> Serialize(const RingMatrix& m) {
  std::vector<std::uint8_t> out;
  AppendSerialized(m, out);
  return out;
}

RingMatrix Deserialize(std::span<const std::uint8_t> bytes,
                       std::size_t* offset) {
  std::size_t at = *offset;
  SSREG_ENFORCE(bytes.size() >= at + 8, ErrorCode::kDeserializeError,
                "truncated matrix header");
  const std::size_t rows = GetLe(bytes, at, 4);
  const std::size_t cols = GetLe(bytes, at + 4, 4);
  at += 8;
  SSREG_ENFORCE(rows >= 1 && cols >= 1, ErrorCode::kDeserializeError,
                "matrix header has a zero dimension");
  const std::size_t count = rows * cols;
  SSREG_ENFORCE(count / cols == rows && (bytes.size() - at) / 8 >= count,
                ErrorCode::kDeserializeError, "truncated matrix payload");
  std::vector<std::uint64_t> data(count);
  for (std::size_t i = 0; i < count; ++i) data[i] = GetLe(bytes, at + 8 * i, 8);
  *offset = at + 8 * count;
  return RingMatrix(rows, cols, std::move(data));
}

RingMatrix Deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  RingMatrix m = Deserialize(bytes, &offset);
  SSREG_ENFORCE(offset == bytes.size(), ErrorCode::kDeserializeError,
                "trailing bytes after matrix");
  return m;
}

}  // namespace ssreg
