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

#include <cstdint>
#include <limits>

#include <gtest/gtest.h>

#include "ssreg/kernels.h"
#include "ssreg/prg.h"
#include "ssreg/ring.h"
#include "test_util.h"

namespace ssreg {
namespace {

using testing::CodeOf;
using testing::kUlp;

const FixedPointConfig kCfg{};

TEST(Encode, KnownValues) {
  EXPECT_EQ(Encode(0.0, kCfg).raw, 0u);
  EXPECT_EQ(Encode(1.5, kCfg).raw, 1572864u);
  EXPECT_EQ(Encode(-1.0, kCfg).raw, std::uint64_t{0} - (std::uint64_t{1} << 20));
  EXPECT_DOUBLE_EQ(Decode({1572864}, kCfg), 1.5);
  EXPECT_DOUBLE_EQ(Decode({0}, kCfg), 0.0);
  EXPECT_NEAR(Decode(Encode(0.197, kCfg), kCfg), 0.197, kUlp);
}

TEST(Encode, RoundTripWithinHalfUlp) {
  const RealMatrix r = testing::RandomReal(50, 20, 3, -1000, 1000);
  for (double v : r.data) EXPECT_LE(std::abs(Decode(Encode(v, kCfg), kCfg) - v), kUlp / 2);
}

TEST(Encode, OverflowAndNonFinite) {
  const double limit = std::ldexp(1.0, 63 - 20);
  EXPECT_EQ(CodeOf([&] { Encode(limit, kCfg); }), ErrorCode::kMagnitudeOverflow);
  EXPECT_EQ(CodeOf([&] { Encode(-limit, kCfg); }), ErrorCode::kMagnitudeOverflow);
  EXPECT_EQ(CodeOf([&] { Encode(std::numeric_limits<double>::quiet_NaN(), kCfg); }),
            ErrorCode::kMagnitudeOverflow);
  EXPECT_NO_THROW(Encode(limit / 2, kCfg));
}

TEST(FixedPoint, ValidateRange) {
  EXPECT_NO_THROW(FixedPointConfig{20}.Validate());
  EXPECT_EQ(CodeOf([] { FixedPointConfig{0}.Validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { FixedPointConfig{32}.Validate(); }), ErrorCode::kInvalidArgument);
}

TEST(MatOps, AddSubNeg) {
  RingMatrix one(1, 1, {1});
  EXPECT_EQ(MatSub(one, one), RingMatrix::Zeros(1, 1));
  const RingMatrix a = UniformMatrix(3, 4, 9);
  EXPECT_EQ(MatAdd(a, MatSub(RingMatrix::Zeros(3, 4), a)), RingMatrix::Zeros(3, 4));
  EXPECT_EQ(MatAdd(a, MatNeg(a)), RingMatrix::Zeros(3, 4));
  const RingMatrix h = EncodeMatrix(RealMatrix(1, 1, {0.5}), kCfg);
  const RingMatrix q = EncodeMatrix(RealMatrix(1, 1, {0.25}), kCfg);
  EXPECT_EQ(MatAdd(h, q), EncodeMatrix(RealMatrix(1, 1, {0.75}), kCfg));
  EXPECT_EQ(CodeOf([&] { MatAdd(a, UniformMatrix(4, 3, 1)); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([&] { MatSub(a, UniformMatrix(3, 3, 1)); }), ErrorCode::kDimensionMismatch);
}

TEST(MatOps, AdditionWrapsModulo) {
  RingMatrix big(1, 1, {~std::uint64_t{0}});
  EXPECT_EQ(MatAdd(big, RingMatrix(1, 1, {2}))(0, 0), 1u);
}

TEST(MatMul, IdentityAndScalar) {
  const RingMatrix b = UniformMatrix(2, 2, 5);
  const RingMatrix prod = MatMulRaw(RingMatrix::Identity(2, kCfg), b);
  EXPECT_EQ(Truncate(prod, kCfg).values().size(), 4u);
  // Identity carries f bits, so the exact product is b shifted by f.
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_EQ(prod.values()[i], b.values()[i] << 20);
  const RingMatrix p = MatMulRaw(EncodeMatrix(RealMatrix(1, 1, {1.5}), kCfg),
                                 EncodeMatrix(RealMatrix(1, 1, {2.0}), kCfg));
  EXPECT_EQ(p(0, 0), std::uint64_t{3} << 40);
  EXPECT_EQ(Truncate(p, kCfg)(0, 0), std::uint64_t{3} << 20);
}

TEST(MatMul, IdentityOnEncodedValues) {
  const RealMatrix b = testing::RandomReal(2, 2, 11);
  const RingMatrix eb = EncodeMatrix(b, kCfg);
  EXPECT_EQ(Truncate(MatMulRaw(RingMatrix::Identity(2, kCfg), eb), kCfg), eb);
}

TEST(MatMul, MatchesDoubleOracle) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const RealMatrix a = testing::RandomReal(3, 4, seed);
    const RealMatrix b = testing::RandomReal(4, 2, seed + 1000);
    const RealMatrix want = testing::NaiveProduct(a, b);
    const RealMatrix ra = DecodeMatrix(EncodeMatrix(a, kCfg), kCfg);
    const RealMatrix rb = DecodeMatrix(EncodeMatrix(b, kCfg), kCfg);
    const RealMatrix exact = testing::NaiveProduct(ra, rb);
    const RealMatrix got = DecodeMatrix(
        Truncate(MatMulRaw(EncodeMatrix(a, kCfg), EncodeMatrix(b, kCfg)), kCfg), kCfg);
    // Truncation of the exact encoded product loses at most one ulp.
    EXPECT_LE(testing::MaxAbsDiff(got, exact), kUlp);
    // Against the unrounded reals the encoding error adds 4 * 8 * ulp.
    EXPECT_LE(testing::MaxAbsDiff(got, want), kUlp * (1 + 4 * 8));
  }
  EXPECT_EQ(CodeOf([] { MatMulRaw(UniformMatrix(2, 3, 1), UniformMatrix(2, 3, 2)); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Truncate, SignSemantics) {
  const RingElement neg_half_2f = EncodeWithBits(-0.5, 40);
  const RingMatrix t = Truncate(RingMatrix(1, 1, {neg_half_2f.raw}), kCfg);
  const std::int64_t diff = static_cast<std::int64_t>(t(0, 0) - Encode(-0.5, kCfg).raw);
  EXPECT_LE(std::abs(diff), 1);
  // Arithmetic shift floors toward minus infinity.
  EXPECT_EQ(Truncate(RingMatrix(1, 1, {~std::uint64_t{0}}), kCfg)(0, 0), ~std::uint64_t{0});
}

TEST(Truncate, RandomProductsWithinOneUlp) {
  Prg prg(77);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = (prg.NextDouble() - 0.5) * 200;
    const double b = (prg.NextDouble() - 0.5) * 200;
    const RingElement ea = Encode(a, kCfg), eb = Encode(b, kCfg);
    const double exact = Decode(ea, kCfg) * Decode(eb, kCfg);
    const RingMatrix t = Truncate(RingMatrix(1, 1, {(ea * eb).raw}), kCfg);
    worst = std::max(worst, std::abs(Decode(t.At(0, 0), kCfg) - exact));
  }
  EXPECT_LE(worst, kUlp);
}

TEST(Uniform, DeterministicAndSeedSensitive) {
  EXPECT_EQ(UniformMatrix(4, 4, 123), UniformMatrix(4, 4, 123));
  EXPECT_NE(UniformMatrix(4, 4, 123), UniformMatrix(4, 4, 124));
}

TEST(Uniform, SignedMeanNearZero) {
  const RingMatrix m = UniformMatrix(1, 100000, 99);
  double sum = 0;
  for (std::uint64_t v : m.values()) sum += std::ldexp(static_cast<double>(static_cast<std::int64_t>(v)), -63);
  const double mean = sum / 1e5;
  // Uniform on [-1, 1): sigma = 1/sqrt(3); the mean has sigma / sqrt(1e5).
  EXPECT_LE(std::abs(mean), 3 * (1 / std::sqrt(3.0)) / std::sqrt(1e5));
}

TEST(Serialize, RoundTripAndLayout) {
  const RingMatrix m(2, 1, {0x0102030405060708ULL, 7});
  const auto bytes = Serialize(m);
  ASSERT_EQ(bytes.size(), 8u + 16u);
  EXPECT_EQ(bytes[0], 2);
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 0x08);
  EXPECT_EQ(bytes[15], 0x01);
  EXPECT_EQ(Deserialize(bytes), m);
  auto cut = bytes;
  cut.pop_back();
  EXPECT_EQ(CodeOf([&] { Deserialize(cut); }), ErrorCode::kDeserializeError);
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_EQ(CodeOf([&] { Deserialize(extra); }), ErrorCode::kDeserializeError);
}

TEST(Shape, EvenOddPadStack) {
  const RingMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(EvenColumns(a), RingMatrix(2, 2, {1, 3, 4, 6}));
  EXPECT_EQ(OddColumns(a), RingMatrix(2, 1, {2, 5}));
  EXPECT_EQ(EvenRows(a), RingMatrix(1, 3, {1, 2, 3}));
  EXPECT_EQ(PadColumns(a, 1), RingMatrix(2, 4, {1, 2, 3, 0, 4, 5, 6, 0}));
  EXPECT_EQ(PadRows(a, 1), RingMatrix(3, 3, {1, 2, 3, 4, 5, 6, 0, 0, 0}));
  EXPECT_EQ(Transpose(a), RingMatrix(3, 2, {1, 4, 2, 5, 3, 6}));
  EXPECT_EQ(VStack({SliceRows(a, 0, 1), SliceRows(a, 1, 2)}), a);
  EXPECT_EQ(Diagonal(RingMatrix(2, 1, {7, 9})), RingMatrix(2, 2, {7, 0, 0, 9}));
}

TEST(Kernels, ParallelMatchesSerial) {
  for (std::size_t n : {3u, 17u, 200u}) {
    const RingMatrix a = UniformMatrix(n, n + 1, n);
    const RingMatrix b = UniformMatrix(n + 1, n + 2, n + 7);
    std::vector<std::uint64_t> c1(n * (n + 2)), c2(n * (n + 2));
    kernels::MatMul(a.data(), b.data(), c1, n, n + 1, n + 2);
    kernels::serial::MatMul(a.data(), b.data(), c2, n, n + 1, n + 2);
    EXPECT_EQ(c1, c2);
    std::vector<std::uint64_t> s1(a.size()), s2(a.size());
    kernels::ShiftRight(a.data(), 20, s1);
    kernels::serial::ShiftRight(a.data(), 20, s2);
    EXPECT_EQ(s1, s2);
    kernels::Add(a.data(), a.data(), s1);
    kernels::serial::Add(a.data(), a.data(), s2);
    EXPECT_EQ(s1, s2);
    kernels::Sub(a.data(), s1, s1);
    kernels::serial::Sub(a.data(), s2, s2);
    EXPECT_EQ(s1, s2);
  }
}

TEST(Kernels, LargeProductMatchesNaive) {
  const std::size_t n = 64;
  const RingMatrix a = UniformMatrix(n, n, 1), b = UniformMatrix(n, n, 2);
  const RingMatrix c = MatMulRaw(a, b);
  for (std::size_t i = 0; i < n; i += 13)
    for (std::size_t j = 0; j < n; j += 7) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
      EXPECT_EQ(c(i, j), acc);
    }
}

}  // namespace
}  // namespace ssreg
