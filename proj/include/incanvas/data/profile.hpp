// Copyright 2026 The incanvas Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/common/text.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::data {

struct ColumnProfile {
  std::string name;
  ColumnType ctype = ColumnType::kCategorical;
  std::size_t non_null_count = 0;
  std::size_t null_count = 0;
  std::size_t distinct_count = 0;
  // Quantitative columns with at least one value only.
  std::optional<double> min, max, mean, stddev;
  std::vector<Value> sample_values;  // first <= 5 distinct values, row order
};

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_values(a, b) < 0; }
};

inline constexpr std::size_t kMaxSampleValues = 5;

/// Statistics over the non-null cells of one column. The standard deviation
/// is the population one (divide by n).
inline ColumnProfile profile_column(const Column& column, std::size_t row_count) {
  ColumnProfile p;
  p.name = column.name;
  p.ctype = column.ctype;
  std::set<Value, ValueLess> distinct;
  double sum = 0;
  double lo = 0, hi = 0;
  std::size_t numeric = 0;
  for (const auto& cell : column.cells) {
    if (is_null(cell)) continue;
    ++p.non_null_count;
    if (distinct.insert(cell).second && p.sample_values.size() < kMaxSampleValues) p.sample_values.push_back(cell);
    if (auto n = as_number(cell)) {
      if (numeric == 0) lo = hi = *n;
      lo = std::min(lo, *n);
      hi = std::max(hi, *n);
      sum += *n;
      ++numeric;
    }
  }
  p.null_count = row_count - p.non_null_count;
  p.distinct_count = distinct.size();
  if (column.ctype == ColumnType::kQuantitative && numeric > 0) {
    // Rounding can push the mean of near-identical values just past an end.
    double mean = std::clamp(sum / static_cast<double>(numeric), lo, hi);
    double ss = 0;
    for (const auto& cell : column.cells) {
      if (auto n = as_number(cell)) ss += (*n - mean) * (*n - mean);
    }
    p.min = lo;
    p.max = hi;
    p.mean = mean;
    p.stddev = std::sqrt(ss / static_cast<double>(numeric));
  }
  return p;
}

struct DatasetSummary {
  std::string dataset_id;
  std::string name;
  std::size_t row_count = 0;
  std::vector<ColumnProfile> columns;

  const ColumnProfile* find(std::string_view column) const {
    for (const auto& c : columns) {
      if (c.name == column) return &c;
    }
    return nullptr;
  }

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

inline DatasetSummary summarize_dataset(const Dataset& dataset) {
  DatasetSummary s{dataset.id, dataset.name, dataset.row_count, {}};
  s.columns.reserve(dataset.columns.size());
  for (const auto& c : dataset.columns) s.columns.push_back(profile_column(c, dataset.row_count));
  return s;
}

namespace detail {

inline constexpr std::size_t kMaxSampleBytes = 40;

inline std::string clip_utf8(const std::string& s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return s;
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return s.substr(0, cut) + "...";
}

inline nlohmann::ordered_json sample_to_json(const Value& v) {
  if (auto n = as_number(v)) return text::round_significant(*n);
  if (auto t = std::get_if<std::string>(&v)) return clip_utf8(*t, kMaxSampleBytes);
  return value_to_json(v);
}

inline nlohmann::ordered_json optional_stat(const std::optional<double>& v) {
  if (!v) return nullptr;
  return text::round_significant(*v);
}

}  // namespace detail

/// Stable JSON form. Key order is fixed; numbers are rounded to four
/// significant digits.
inline nlohmann::ordered_json DatasetSummary::to_json() const {
  nlohmann::ordered_json out;
  out["dataset_id"] = dataset_id;
  out["name"] = name;
  out["row_count"] = row_count;
  out["column_count"] = columns.size();
  auto cols = nlohmann::ordered_json::array();
  for (const auto& p : columns) {
    nlohmann::ordered_json c;
    c["name"] = p.name;
    c["type"] = std::string(to_string(p.ctype));
    c["non_null_count"] = p.non_null_count;
    c["null_count"] = p.null_count;
    c["null_ratio"] = row_count == 0 ? 0.0
                                     : text::round_significant(static_cast<double>(p.null_count) /
                                                               static_cast<double>(row_count));
    c["distinct_count"] = p.distinct_count;
    c["min"] = detail::optional_stat(p.min);
    c["max"] = detail::optional_stat(p.max);
    c["mean"] = detail::optional_stat(p.mean);
    c["stddev"] = detail::optional_stat(p.stddev);
    auto samples = nlohmann::ordered_json::array();
    for (const auto& v : p.sample_values) samples.push_back(detail::sample_to_json(v));
    c["sample_values"] = std::move(samples);
    cols.push_back(std::move(c));
  }
  out["columns"] = std::move(cols);
  return out;
}

/// Compact human-readable form used inside model prompts.
inline std::string DatasetSummary::to_text() const {
  std::string out;
  out += "Dataset: " + name + "\n";
  out += "Rows: " + std::to_string(row_count) + "\n";
  out += "Columns (" + std::to_string(columns.size()) + "):\n";
  for (const auto& p : columns) {
    out += "- \"" + p.name + "\" (" + std::string(to_string(p.ctype)) + "): ";
    double ratio = row_count == 0 ? 0.0 : 100.0 * static_cast<double>(p.null_count) / static_cast<double>(row_count);
    out += text::format_significant(ratio) + "% null, " + std::to_string(p.distinct_count) + " distinct";
    if (p.min) {
      out += "; range " + text::format_significant(*p.min) + " to " + text::format_significant(*p.max) + ", mean " +
             text::format_significant(*p.mean) + ", stddev " + text::format_significant(*p.stddev);
    }
    if (!p.sample_values.empty()) {
      out += "; samples: ";
      for (std::size_t i = 0; i < p.sample_values.size(); ++i) {
        if (i) out += ", ";
        out += detail::sample_to_json(p.sample_values[i]).dump();
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace incanvas::data
