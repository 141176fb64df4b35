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

#ifndef SSREG_RING_H_
#define SSREG_RING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssreg/dense.h"

namespace ssreg {

class Prg;

// Fixed-point parameters. Reals are scaled by 2^fractional_bits and stored in
// Z_{2^64}; one product of two encoded values carries 2f fractional bits and
// must be truncated back.
struct FixedPointConfig {
  static constexpr int kRingBits = 64;
  int fractional_bits = 20;

  // Throws kInvalidArgument unless 0 < f < kRingBits / 2.
  void Validate() const;
  double Scale() const;
};

// One element of Z_{2^64}. Arithmetic wraps silently.
struct RingElement {
  std::uint64_t raw = 0;

  constexpr std::int64_t Signed() const {
    return static_cast<std::int64_t>(raw);
  }
  friend constexpr RingElement operator+(RingElement a, RingElement b) {
    return {a.raw + b.raw};
  }
  friend constexpr RingElement operator-(RingElement a, RingElement b) {
    return {a.raw - b.raw};
  }
  friend constexpr RingElement operator*(RingElement a, RingElement b) {
    return {a.raw * b.raw};
  }
  friend constexpr bool operator==(RingElement, RingElement) = default;
};

// Row-major matrix over Z_{2^64}. rows, cols >= 1 except for the
// default-constructed empty placeholder.
class RingMatrix {
 public:
  RingMatrix() = default;
  RingMatrix(std::size_t rows, std::size_t cols);
  RingMatrix(std::size_t rows, std::size_t cols,
             std::vector<std::uint64_t> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  std::uint64_t& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  std::uint64_t operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  RingElement At(std::size_t r, std::size_t c) const {
    return {data_[r * cols_ + c]};
  }

  std::span<std::uint64_t> data() { return data_; }
  std::span<const std::uint64_t> data() const { return data_; }
  const std::vector<std::uint64_t>& values() const { return data_; }

  bool SameShape(const RingMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  friend bool operator==(const RingMatrix&, const RingMatrix&) = default;

  static RingMatrix Zeros(std::size_t rows, std::size_t cols) {
    return RingMatrix(rows, cols);
  }
  static RingMatrix Identity(std::size_t n, const FixedPointConfig& cfg);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> data_;
};

// raw = round(v * 2^f) mod 2^64, rounding half away from zero. Throws
// kMagnitudeOverflow when |v| >= 2^(63-f) or v is not finite.
RingElement Encode(double v, const FixedPointConfig& cfg);
double Decode(RingElement e, const FixedPointConfig& cfg);
// Same as Encode/Decode with an explicit scale exponent (used for values that
// carry 2f fractional bits).
RingElement EncodeWithBits(double v, int fractional_bits);
double DecodeWithBits(RingElement e, int fractional_bits);

RingMatrix EncodeMatrix(const RealMatrix& m, const FixedPointConfig& cfg);
RealMatrix DecodeMatrix(const RingMatrix& m, const FixedPointConfig& cfg);

RingMatrix MatAdd(const RingMatrix& a, const RingMatrix& b);
RingMatrix MatSub(const RingMatrix& a, const RingMatrix& b);
RingMatrix MatNeg(const RingMatrix& a);
// Exact ring product; entries carry 2f fractional bits when both inputs carry
// f.
RingMatrix MatMulRaw(const RingMatrix& a, const RingMatrix& b);
// Multiplies every entry by a public ring constant (no truncation).
RingMatrix MatScale(const RingMatrix& a, RingElement c);
// Arithmetic right shift by f of the signed interpretation.
RingMatrix Truncate(const RingMatrix& a, const FixedPointConfig& cfg);
RingMatrix Transpose(const RingMatrix& a);
// Square matrix with v on the diagonal; v must be a column vector.
RingMatrix Diagonal(const RingMatrix& v);

// Columns (or rows) with even / odd zero-based index.
RingMatrix EvenColumns(const RingMatrix& a);
RingMatrix OddColumns(const RingMatrix& a);
RingMatrix EvenRows(const RingMatrix& a);
RingMatrix OddRows(const RingMatrix& a);
RingMatrix PadColumns(const RingMatrix& a, std::size_t extra);
RingMatrix PadRows(const RingMatrix& a, std::size_t extra);
RingMatrix SelectRows(const RingMatrix& a, std::span<const std::size_t> rows);
RingMatrix SliceRows(const RingMatrix& a, std::size_t begin, std::size_t end);
RingMatrix VStack(const std::vector<RingMatrix>& blocks);

// Entries i.i.d. uniform over the full 64-bit range.
RingMatrix UniformMatrix(std::size_t rows, std::size_t cols,
                         std::uint64_t seed);
RingMatrix UniformMatrix(std::size_t rows, std::size_t cols, Prg& prg);

// rows (u32 LE), cols (u32 LE), rows*cols u64 LE words, row-major.
void AppendSerialized(const RingMatrix& m, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> Serialize(const RingMatrix& m);
// Reads one matrix at *offset and advances it. Throws kDeserializeError.
RingMatrix Deserialize(std::span<const std::uint8_t> bytes,
                       std::size_t* offset);
RingMatrix Deserialize(std::span<const std::uint8_t> bytes);
std::size_t SerializedSize(const RingMatrix& m);

}  // namespace ssreg

#endif  // SSREG_RING_H_
