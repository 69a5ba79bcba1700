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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "incanvas/common/error.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::data {

/// Square matrix of Pearson coefficients; null where undefined.
struct CorrelationMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> r;
};

namespace detail {

// Pairwise-complete Pearson coefficient (centered two-pass form).
inline std::optional<double> pearson(const std::vector<Value>& xs, const std::vector<Value>& ys) {
  std::vector<double> a, b;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto x = as_number(xs[i]);
    auto y = as_number(ys[i]);
    if (x && y) {
      a.push_back(*x);
      b.push_back(*y);
    }
  }
  if (a.size() < 2) return std::nullopt;
  // zero variance is decided exactly, not from rounded sums of squares
  if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; }) ||
      std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; })) {
    return std::nullopt;
  }
  double n = static_cast<double>(a.size());
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0 || sbb <= 0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

inline bool has_spread(const std::vector<Value>& xs) {
  const double* first = nullptr;
  for (const auto& v : xs) {
    if (auto x = as_number(v)) {
      if (!first) {
        first = x;
      } else if (*x != *first) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

/// Pairwise-complete Pearson correlation between quantitative columns. The
/// matrix is exactly symmetric; the diagonal is exactly 1 for columns with
/// two or more distinct values and null otherwise.
inline CorrelationMatrix correlation_matrix(const Dataset& ds, const std::vector<std::string>& columns) {
  if (columns.size() < 2) {
    throw Error(errc::kInvalidQuery, "correlation needs at least two columns", {{"count", columns.size()}});
  }
  std::vector<const Column*> cols;
  for (const auto& name : columns) {
    const Column* c = ds.find(name);
    if (!c) throw Error(errc::kUnknownColumn, "unknown column '" + name + "'", {{"column", name}});
    if (c->ctype != ColumnType::kQuantitative) {
      throw Error(errc::kNonQuantitativeColumn, "column '" + name + "' is not quantitative", {{"column", name}});
    }
    cols.push_back(c);
  }
  const std::size_t k = cols.size();
  CorrelationMatrix m{columns, std::vector<std::vector<std::optional<double>>>(k, std::vector<std::optional<double>>(k))};
  for (std::size_t i = 0; i < k; ++i) {
    if (detail::has_spread(cols[i]->cells)) m.r[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      auto v = detail::pearson(cols[i]->cells, cols[j]->cells);
      m.r[i][j] = v;
      m.r[j][i] = v;
    }
  }
  return m;
}

struct QuantileLabels {
  std::vector<std::size_t> top;     // row indices, largest value first
  std::vector<std::size_t> bottom;  // row indices, smallest value first
};

/// ceil(n * p), treating products within 1e-9 of an integer as that integer
/// so that e.g. 10 * 0.1 yields 1 regardless of binary rounding.
inline std::size_t quantile_count(std::size_t n, double p) {
  double raw = static_cast<double>(n) * p;
  double nearest = std::round(raw);
  if (std::abs(raw - nearest) < 1e-9) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(raw));
}

/// Nearest-rank top/bottom labeling. Rows are ranked by (value, row index)
/// ascending; the first ceil(n*p) are "bottom", the last ceil(n*p) are "top".
/// Row order breaks ties, which keeps the sets disjoint whenever
/// 2*ceil(n*p) <= n. Rows whose field is null take no part.
inline QuantileLabels quantile_labels(const DataTable& table, std::string_view field, double p) {
  if (!(p > 0.0 && p < 0.5)) throw Error(errc::kInvalidFraction, "fraction must lie in (0, 0.5)", {{"p", p}});
  auto col = table.index_of(field);
  if (!col) throw Error(errc::kUnknownColumn, "unknown field '" + std::string(field) + "'", {{"column", field}});
  if (table.rows.empty()) throw Error(errc::kEmptyTable, "cannot label an empty table");
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const Value& v = table.rows[r][*col];
    if (is_null(v)) continue;
    auto x = as_number(v);
    if (!x) {
      throw Error(errc::kFieldNotNumeric, "field '" + std::string(field) + "' is not numeric",
                  {{"column", field}, {"row", r}});
    }
    ranked.emplace_back(*x, r);
  }
  if (ranked.empty()) throw Error(errc::kEmptyTable, "field '" + std::string(field) + "' has no values");
  std::sort(ranked.begin(), ranked.end());
  std::size_t k = std::min(quantile_count(ranked.size(), p), ranked.size());
  QuantileLabels out;
  for (std::size_t i = 0; i < k; ++i) {
    out.bottom.push_back(ranked[i].second);
    out.top.push_back(ranked[ranked.size() - 1 - i].second);
  }
  return out;
}

}  // namespace incanvas::data
