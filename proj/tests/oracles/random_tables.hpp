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

// Seeded random generators for property tests.

#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "incanvas/data/query.hpp"
#include "incanvas/data/value.hpp"

namespace gen {

using incanvas::data::Aggregate;
using incanvas::data::ChartQuery;
using incanvas::data::Column;
using incanvas::data::ColumnType;
using incanvas::data::Dataset;
using incanvas::data::Date;
using incanvas::data::FilterOp;
using incanvas::data::Value;

inline bool chance(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Mixed-type table: two categorical, three quantitative (half-integer
/// values) and one temporal column, roughly 10% nulls each.
inline Dataset mixed_table(std::mt19937_64& rng, std::size_t rows) {
  Dataset ds;
  ds.id = "ds_random";
  ds.name = "random";
  ds.row_count = rows;
  const char* regions[] = {"A", "B", "C", "D"};
  const char* segments[] = {"x", "y"};
  Column region{"region", ColumnType::kCategorical, {}}, segment{"segment", ColumnType::kCategorical, {}};
  Column gdp{"gdp", ColumnType::kQuantitative, {}}, birth{"birth", ColumnType::kQuantitative, {}},
      wage{"wage", ColumnType::kQuantitative, {}};
  Column day{"day", ColumnType::kTemporal, {}};
  auto maybe_null = [&](Value v) { return chance(rng, 0.1) ? Value() : v; };
  for (std::size_t r = 0; r < rows; ++r) {
    region.cells.push_back(maybe_null(std::string(regions[pick(rng, 0, 3)])));
    segment.cells.push_back(maybe_null(std::string(segments[pick(rng, 0, 1)])));
    gdp.cells.push_back(maybe_null(pick(rng, -40, 40) * 0.5));
    birth.cells.push_back(maybe_null(static_cast<double>(pick(rng, 0, 30))));
    wage.cells.push_back(maybe_null(pick(rng, 0, 400) * 0.25));
    day.cells.push_back(maybe_null(Date{2023, pick(rng, 1, 3), pick(rng, 1, 28)}));
  }
  ds.columns = {region, segment, gdp, birth, wage, day};
  return ds;
}

/// A query that is valid against mixed_table().
inline ChartQuery random_query(std::mt19937_64& rng, const Dataset& ds) {
  const std::vector<std::string> quant = {"gdp", "birth", "wage"};
  const std::vector<std::string> cat = {"region", "segment"};
  const std::vector<std::string> all = {"region", "segment", "gdp", "birth", "wage", "day"};
  ChartQuery q;
  q.source = ds.id;

  int nproj = pick(rng, 1, 4);
  bool grouped = chance(rng, 0.5);
  for (int i = 0; i < nproj; ++i) {
    incanvas::data::Projection p;
    if (grouped && chance(rng, 0.5)) {
      int a = pick(rng, 0, 4);
      p.aggregate = static_cast<Aggregate>(a);
      if (a == 2) {
        p.column = all[pick(rng, 0, 5)];
      } else if (a == 3 || a == 4) {
        p.column = chance(rng, 0.2) ? "day" : quant[pick(rng, 0, 2)];
      } else {
        p.column = quant[pick(rng, 0, 2)];
      }
    } else {
      p.column = all[pick(rng, 0, 5)];
    }
    q.projections.push_back(p);
  }

  int nfilters = pick(rng, 0, 2);
  for (int i = 0; i < nfilters; ++i) {
    incanvas::data::Filter f;
    int kind = pick(rng, 0, 2);
    if (kind == 0) {
      f.column = cat[pick(rng, 0, 1)];
      f.op = chance(rng, 0.5) ? FilterOp::kEq : FilterOp::kNe;
      f.value = std::string(f.column == "region" ? (chance(rng, 0.5) ? "A" : "C") : "x");
    } else if (kind == 1) {
      f.column = quant[pick(rng, 0, 2)];
      f.op = static_cast<FilterOp>(pick(rng, 0, 6));
      f.value = static_cast<double>(pick(rng, -10, 40));
      f.upper = std::get<double>(f.value) + pick(rng, 0, 30);
    } else {
      f.column = "day";
      f.op = static_cast<FilterOp>(pick(rng, 0, 6));
      f.value = Date{2023, pick(rng, 1, 2), pick(rng, 1, 28)};
      f.upper = Date{2023, 3, pick(rng, 1, 28)};
    }
    q.filters.push_back(f);
  }

  if (chance(rng, 0.3)) q.bins = incanvas::data::Binning{quant[pick(rng, 0, 2)], pick(rng, 1, 8)};
  if (chance(rng, 0.5)) {
    const auto& p = q.projections[pick(rng, 0, static_cast<int>(q.projections.size()) - 1)];
    q.sort = incanvas::data::SortKey{p.column, p.aggregate,
                                      chance(rng, 0.5) ? incanvas::data::SortDirection::kAscending
                                                       : incanvas::data::SortDirection::kDescending};
  }
  if (chance(rng, 0.4)) q.limit = static_cast<std::size_t>(pick(rng, 1, 20));
  return q;
}

/// Quantitative-only table for correlation checks: mixes continuous, integer
/// and occasionally constant columns with ~15% nulls.
inline Dataset numeric_table(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  Dataset ds;
  ds.id = "ds_numeric";
  ds.row_count = rows;
  for (std::size_t c = 0; c < cols; ++c) {
    Column col{"c" + std::to_string(c), ColumnType::kQuantitative, {}};
    int style = pick(rng, 0, 9);
    double scale = std::pow(10.0, pick(rng, -1, 3));
    for (std::size_t r = 0; r < rows; ++r) {
      if (chance(rng, 0.15)) {
        col.cells.emplace_back();
      } else if (style == 0) {
        col.cells.emplace_back(3.25);
      } else if (style < 4) {
        col.cells.emplace_back(static_cast<double>(pick(rng, -20, 20)));
      } else {
        col.cells.emplace_back(std::uniform_real_distribution<double>(-1, 1)(rng) * scale);
      }
    }
    ds.columns.push_back(std::move(col));
  }
  return ds;
}

}  // namespace gen
