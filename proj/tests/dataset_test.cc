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

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "ssreg/dataset.h"
#include "test_util.h"

namespace ssreg {
namespace {

using testing::CodeOf;
namespace fs = std::filesystem;

TEST(Csv, FixtureLoadsExactly) {
  const Dataset d = LoadCsv(fs::path(SSREG_TEST_DATA_DIR) / "fixture.csv", "y");
  EXPECT_EQ(d.x, RealMatrix(3, 2, {1, 2, -3.25, 400, 0, 7}));
  EXPECT_EQ(d.y, std::vector<double>({0.5, 1, 0}));
  EXPECT_EQ(d.feature_names, std::vector<std::string>({"a", "b"}));
  EXPECT_EQ(d.source_digest.size(), 64u);
}

TEST(Csv, ParseErrorNamesTheCell) {
  try {
    ParseCsv("a,y\n1,2\n3,oops\n", "y");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    const std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("column 2"), std::string::npos) << what;
    EXPECT_NE(what.find("'y'"), std::string::npos) << what;
  }
  EXPECT_EQ(CodeOf([] { ParseCsv("a,b\n1,2\n", "y"); }), ErrorCode::kMissingLabelColumn);
  EXPECT_EQ(CodeOf([] { ParseCsv("a,y\n1,2,3\n", "y"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { LoadCsv("/nonexistent/file.csv", "y"); }), ErrorCode::kIoError);
}

TEST(Csv, WriteThenLoadRoundTrip) {
  const Dataset d = MakeLinearDataset(20, 3, 4, 0.1);
  const fs::path path = fs::temp_directory_path() / "ssreg_roundtrip.csv";
  WriteCsv(path, d);
  const Dataset back = LoadCsv(path, "y");
  EXPECT_EQ(back.x, d.x);
  EXPECT_EQ(back.y, d.y);
  fs::remove(path);
}

TEST(Subsample, SeededAndOrdered) {
  const Dataset d = MakeLinearDataset(100, 2, 5);
  const Dataset a = Subsample(d, 30, 9), b = Subsample(d, 30, 9), c = Subsample(d, 30, 10);
  EXPECT_EQ(a.x, b.x);
  EXPECT_NE(a.x, c.x);
  EXPECT_EQ(a.x.rows, 30u);
  // Order preserved: every kept row appears in the source after the previous one.
  std::size_t at = 0;
  for (std::size_t r = 0; r < a.x.rows; ++r) {
    while (at < d.x.rows && d.x(at, 0) != a.x(r, 0)) ++at;
    ASSERT_LT(at, d.x.rows);
    EXPECT_EQ(d.y[at], a.y[r]);
  }
  EXPECT_EQ(Subsample(d, 500, 1).x, d.x);
}

TEST(Partition, HorizontalEqualHalves) {
  const Dataset d = MakeLinearDataset(100, 3, 6);
  const PartitionedDataset p = Partition(d, Scheme::kHorizontal, 2);
  ASSERT_EQ(p.parties.size(), 2u);
  EXPECT_EQ(p.slices[0], (Slice{0, 50}));
  EXPECT_EQ(p.slices[1], (Slice{50, 100}));
  EXPECT_EQ(p.parties[1].x.rows, 50u);
  EXPECT_EQ(p.parties[1].y.size(), 50u);
  const Dataset back = Reassemble(p);
  EXPECT_EQ(back.x, d.x);
  EXPECT_EQ(back.y, d.y);
}

TEST(Partition, VerticalRatioBlocks) {
  const Dataset d = MakeLinearDataset(10, 5, 7);
  const PartitionedDataset p = Partition(d, Scheme::kVertical, 2, {3, 2}, 1);
  EXPECT_EQ(p.slices[0], (Slice{0, 3}));
  EXPECT_EQ(p.slices[1], (Slice{3, 5}));
  EXPECT_TRUE(p.parties[0].y.empty());
  EXPECT_EQ(p.parties[1].y, d.y);
  const Dataset back = Reassemble(p);
  EXPECT_EQ(back.x, d.x);
  EXPECT_EQ(back.y, d.y);
}

TEST(Partition, TooSmall) {
  const Dataset d = MakeLinearDataset(3, 2, 8);
  EXPECT_EQ(CodeOf([&] { Partition(d, Scheme::kVertical, 3); }), ErrorCode::kTooFewColumns);
  EXPECT_EQ(CodeOf([&] { Partition(d, Scheme::kHorizontal, 4); }), ErrorCode::kTooFewRows);
}

TEST(SplitRange, SumsToTotal) {
  EXPECT_EQ(CodeOf([] { SplitRange(17, 1); }), ErrorCode::kInvalidPartyCount);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto s = SplitRange(17, n);
    EXPECT_EQ(s.front().begin, 0u);
    EXPECT_EQ(s.back().end, 17u);
    for (std::size_t i = 1; i < n; ++i) EXPECT_EQ(s[i].begin, s[i - 1].end);
  }
}

TEST(Generators, SeparableHasBothClasses) {
  const Dataset d = MakeSeparableDataset(200, 4, 9);
  std::size_t ones = 0;
  for (double v : d.y) ones += v == 1.0;
  EXPECT_GT(ones, 50u);
  EXPECT_LT(ones, 150u);
}

}  // namespace
}  // namespace ssreg
