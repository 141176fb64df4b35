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

#include "ssreg/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "ssreg/error.h"
#include "ssreg/prg.h"

namespace ssreg {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string Unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

Dataset ParseCsv(std::string_view text, std::string_view label_column) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  // Line numbers below are 1-based file lines.
  std::size_t header_at = 0;
  while (header_at < lines.size() && Trim(lines[header_at]).empty()) ++header_at;
  SSREG_ENFORCE(header_at < lines.size(), ErrorCode::kParseError,
                "csv has no header row");
  const auto header = SplitFields(lines[header_at]);
  std::size_t label_at = header.size();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (Unquote(header[c]) == label_column) label_at = c;
  SSREG_ENFORCE(label_at < header.size(), ErrorCode::kMissingLabelColumn,
                "label column '" + std::string(label_column) + "' not found");

  Dataset out;
  out.label_name = std::string(label_column);
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_at) out.feature_names.push_back(Unquote(header[c]));
  const std::size_t d = header.size() - 1;
  std::vector<double> values;
  for (std::size_t li = header_at + 1; li < lines.size(); ++li) {
    if (Trim(lines[li]).empty()) continue;
    const auto fields = SplitFields(lines[li]);
    SSREG_ENFORCE(fields.size() == header.size(), ErrorCode::kParseError,
                  "line " + std::to_string(li + 1) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0;
      const auto f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      SSREG_ENFORCE(!f.empty() && ec == std::errc() && ptr == f.data() + f.size() &&
                        std::isfinite(v),
                    ErrorCode::kParseError,
                    "line " + std::to_string(li + 1) + ", column " +
                        std::to_string(c + 1) + " ('" + Unquote(header[c]) +
                        "'): '" + std::string(f) + "' is not a number");
      if (c == label_at) {
        out.y.push_back(v);
      } else {
        values.push_back(v);
      }
    }
  }
  out.x = RealMatrix(out.y.size(), d, std::move(values));
  return out;
}

Dataset LoadCsv(const std::filesystem::path& path,
                std::string_view label_column) {
  std::ifstream f(path, std::ios::binary);
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  Dataset out = ParseCsv(text, label_column);
  out.source_digest = HexDigest(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return out;
}

void WriteCsv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream f(path, std::ios::trunc);
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot write " + path.string());
  f << std::setprecision(17);
  // A slice without labels (vertical non-owner) gets no label column.
  const bool labels = !data.y.empty();
  for (std::size_t c = 0; c < data.x.cols; ++c) {
    if (c > 0) f << ',';
    f << (c < data.feature_names.size() ? data.feature_names[c]
                                        : "x" + std::to_string(c));
  }
  if (labels) f << ',' << (data.label_name.empty() ? "y" : data.label_name);
  f << '\n';
  for (std::size_t r = 0; r < data.x.rows; ++r) {
    for (std::size_t c = 0; c < data.x.cols; ++c) {
      if (c > 0) f << ',';
      f << data.x(r, c);
    }
    if (labels) f << ',' << data.y[r];
    f << '\n';
  }
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "short write to " + path.string());
}

Dataset Subsample(const Dataset& data, std::size_t m, std::uint64_t seed) {
  if (m >= data.x.rows) return data;
  std::vector<std::size_t> idx(data.x.rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Prg prg(DeriveSeed(seed, "subsample"));
  // Partial Fisher-Yates: the first m slots become a uniform subset.
  for (std::size_t i = 0; i < m; ++i)
    std::swap(idx[i], idx[i + prg.Uniform(idx.size() - i)]);
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  Dataset out = data;
  out.x = SelectRows(data.x, idx);
  out.y = SelectEntries(data.y, idx);
  return out;
}

Dataset MakeLinearDataset(std::size_t m, std::size_t d, std::uint64_t seed,
                          double noise) {
  Prg prg(DeriveSeed(seed, "linear-data"));
  std::vector<double> w(d);
  for (auto& v : w) v = prg.NextGaussian();
  Dataset out;
  out.x = RealMatrix(m, d);
  out.y.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    double z = 0;
    for (std::size_t c = 0; c < d; ++c) {
      out.x(r, c) = prg.NextDouble();
      z += out.x(r, c) * w[c];
    }
    out.y[r] = z + noise * prg.NextGaussian();
  }
  for (std::size_t c = 0; c < d; ++c)
    out.feature_names.push_back("x" + std::to_string(c));
  out.label_name = "y";
  return out;
}

Dataset MakeSeparableDataset(std::size_t m, std::size_t d, std::uint64_t seed,
                             double separation) {
  Prg prg(DeriveSeed(seed, "separable-data"));
  std::vector<double> direction(d);
  double norm = 0;
  for (auto& v : direction) {
    v = prg.NextGaussian();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  Dataset out;
  out.x = RealMatrix(m, d);
  out.y.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double label = static_cast<double>(r % 2);
    const double offset = (label - 0.5) * separation;
    for (std::size_t c = 0; c < d; ++c)
      out.x(r, c) = prg.NextGaussian() + offset * direction[c] / norm;
    out.y[r] = label;
  }
  for (std::size_t c = 0; c < d; ++c)
    out.feature_names.push_back("x" + std::to_string(c));
  out.label_name = "y";
  return out;
}

std::vector<Slice> SplitRange(std::size_t total, std::size_t n,
                              const std::vector<double>& ratios) {
  SSREG_ENFORCE(n >= 2, ErrorCode::kInvalidPartyCount,
                "partition needs at least 2 parties");
  std::vector<double> weights = ratios;
  if (weights.empty()) weights.assign(n, 1.0);
  SSREG_ENFORCE(weights.size() == n, ErrorCode::kInvalidArgument,
                "need one ratio per party");
  double sum = 0;
  for (double v : weights) {
    SSREG_ENFORCE(v > 0 && std::isfinite(v), ErrorCode::kInvalidArgument,
                  "ratios must be positive");
    sum += v;
  }
  std::vector<Slice> out(n);
  double cumulative = 0;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < n; ++p) {
    cumulative += weights[p];
    const std::size_t end =
        p + 1 == n ? total
                   : static_cast<std::size_t>(std::llround(
                         static_cast<double>(total) * cumulative / sum));
    out[p] = {begin, std::max(begin, end)};
    begin = out[p].end;
  }
  return out;
}

PartitionedDataset Partition(const Dataset& data, Scheme scheme, std::size_t n,
                             const std::vector<double>& ratios,
                             PartyId label_owner) {
  PartitionedDataset out;
  out.scheme = scheme;
  out.source_digest = data.source_digest;
  if (scheme == Scheme::kHorizontal) {
    out.slices = SplitRange(data.x.rows, n, ratios);
    for (const auto& s : out.slices) {
      SSREG_ENFORCE(s.end > s.begin, ErrorCode::kTooFewRows,
                    std::to_string(data.x.rows) + " rows cannot feed " +
                        std::to_string(n) + " parties");
      std::vector<std::size_t> rows(s.end - s.begin);
      std::iota(rows.begin(), rows.end(), s.begin);
      out.parties.push_back({SelectRows(data.x, rows), SelectEntries(data.y, rows)});
    }
  } else {
    SSREG_ENFORCE(label_owner < n, ErrorCode::kInvalidArgument,
                  "label owner is not a party");
    out.label_owner = label_owner;
    out.slices = SplitRange(data.x.cols, n, ratios);
    for (PartyId p = 0; p < n; ++p) {
      const auto& s = out.slices[p];
      SSREG_ENFORCE(s.end > s.begin, ErrorCode::kTooFewColumns,
                    std::to_string(data.x.cols) + " columns cannot feed " +
                        std::to_string(n) + " parties");
      out.parties.push_back({SelectColumns(data.x, s.begin, s.end),
                             p == label_owner ? data.y : std::vector<double>{}});
    }
  }
  return out;
}

Dataset Reassemble(const PartitionedDataset& parts) {
  Dataset out;
  out.source_digest = parts.source_digest;
  if (parts.scheme == Scheme::kHorizontal) {
    const std::size_t d = parts.parties.at(0).x.cols;
    std::vector<double> values;
    for (const auto& p : parts.parties) {
      values.insert(values.end(), p.x.data.begin(), p.x.data.end());
      out.y.insert(out.y.end(), p.y.begin(), p.y.end());
    }
    out.x = RealMatrix(out.y.size(), d, std::move(values));
  } else {
    const std::size_t m = parts.parties.at(0).x.rows;
    std::size_t d = 0;
    for (const auto& p : parts.parties) d += p.x.cols;
    out.x = RealMatrix(m, d);
    std::size_t at = 0;
    for (const auto& p : parts.parties) {
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < p.x.cols; ++c) out.x(r, at + c) = p.x(r, c);
      at += p.x.cols;
    }
    out.y = parts.parties.at(parts.label_owner).y;
  }
  return out;
}

}  // namespace ssreg
