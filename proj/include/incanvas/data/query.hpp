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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incanvas/common/error.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::data {

enum class Aggregate { kSum, kMean, kCount, kMin, kMax };
enum class FilterOp { kEq, kNe, kLt, kLe, kGt, kGe, kInRange };
enum class SortDirection { kAscending, kDescending };

inline std::string_view to_string(Aggregate a) {
  switch (a) {
    case Aggregate::kSum: return "sum";
    case Aggregate::kMean: return "mean";
    case Aggregate::kCount: return "count";
    case Aggregate::kMin: return "min";
    case Aggregate::kMax: return "max";
  }
  return "count";
}

inline std::optional<Aggregate> aggregate_from_string(std::string_view s) {
  if (s == "sum") return Aggregate::kSum;
  if (s == "mean" || s == "average" || s == "avg") return Aggregate::kMean;
  if (s == "count") return Aggregate::kCount;
  if (s == "min") return Aggregate::kMin;
  if (s == "max") return Aggregate::kMax;
  return std::nullopt;
}

inline std::string_view to_string(FilterOp op) {
  switch (op) {
    case FilterOp::kEq: return "=";
    case FilterOp::kNe: return "!=";
    case FilterOp::kLt: return "<";
    case FilterOp::kLe: return "<=";
    case FilterOp::kGt: return ">";
    case FilterOp::kGe: return ">=";
    case FilterOp::kInRange: return "in-range";
  }
  return "=";
}

inline std::optional<FilterOp> filter_op_from_string(std::string_view s) {
  if (s == "=" || s == "==") return FilterOp::kEq;
  if (s == "!=" || s == "<>" || s == "\xE2\x89\xA0") return FilterOp::kNe;
  if (s == "<") return FilterOp::kLt;
  if (s == "<=" || s == "\xE2\x89\xA4") return FilterOp::kLe;
  if (s == ">") return FilterOp::kGt;
  if (s == ">=" || s == "\xE2\x89\xA5") return FilterOp::kGe;
  if (s == "in-range" || s == "in_range" || s == "between") return FilterOp::kInRange;
  return std::nullopt;
}

struct Projection {
  std::string column;
  std::optional<Aggregate> aggregate;

  /// "col" for plain projections, "agg(col)" for aggregated ones.
  std::string output_name() const {
    return aggregate ? std::string(to_string(*aggregate)) + "(" + column + ")" : column;
  }
  bool operator==(const Projection&) const = default;
};

struct Filter {
  std::string column;
  FilterOp op = FilterOp::kEq;
  Value value;
  Value upper;  // inclusive upper bound, in-range only

  bool operator==(const Filter&) const = default;
};

struct Binning {
  std::string column;
  int bin_count = 10;
  bool operator==(const Binning&) const = default;
};

struct SortKey {
  std::string column;
  std::optional<Aggregate> aggregate;
  SortDirection direction = SortDirection::kAscending;
  bool operator==(const SortKey&) const = default;
};

/// Executable data-shaping plan. Stages run in a fixed order: filter, bin,
/// group/aggregate, sort, limit.
struct ChartQuery {
  std::string source;  // dataset id; empty matches any dataset
  std::vector<Projection> projections;
  std::vector<Filter> filters;
  std::optional<Binning> bins;
  std::optional<SortKey> sort;
  std::optional<std::size_t> limit;

  bool has_aggregates() const {
    return std::any_of(projections.begin(), projections.end(), [](const auto& p) { return p.aggregate.has_value(); });
  }
  bool operator==(const ChartQuery&) const = default;
};

/// Equal-width bins spanning [lo, lo + count * width] of the filtered values.
struct BinLayout {
  double lo = 0;
  double width = 0;
  int count = 1;

  int index_of(double v) const {
    if (width <= 0) return 0;
    auto idx = static_cast<long long>(std::floor((v - lo) / width));
    return static_cast<int>(std::clamp<long long>(idx, 0, count - 1));
  }
  double start_of(int idx) const { return lo + idx * width; }
};

struct QueryResult {
  DataTable table;
  std::optional<BinLayout> bins;  // set when the query bins and any row survived filtering
};

namespace detail {

inline bool literal_matches(const Value& literal, ColumnType type) {
  switch (type) {
    case ColumnType::kQuantitative: return std::holds_alternative<double>(literal);
    case ColumnType::kCategorical: return std::holds_alternative<std::string>(literal);
    case ColumnType::kTemporal: return std::holds_alternative<Date>(literal);
  }
  return false;
}

/// Temporal literals may arrive as ISO strings; turn them into dates.
inline Value coerce_literal(const Value& literal, ColumnType type) {
  if (type == ColumnType::kTemporal) {
    if (auto s = std::get_if<std::string>(&literal)) {
      if (auto d = parse_date(*s)) return *d;
    }
  }
  return literal;
}

inline bool passes(const Value& cell, const Filter& f) {
  if (is_null(cell)) return false;
  int c = compare_values(cell, f.value);
  switch (f.op) {
    case FilterOp::kEq: return c == 0;
    case FilterOp::kNe: return c != 0;
    case FilterOp::kLt: return c < 0;
    case FilterOp::kLe: return c <= 0;
    case FilterOp::kGt: return c > 0;
    case FilterOp::kGe: return c >= 0;
    case FilterOp::kInRange: return c >= 0 && compare_values(cell, f.upper) <= 0;
  }
  return false;
}

struct KeyLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      int c = compare_values(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

struct Accumulator {
  std::size_t count = 0;
  double sum = 0;
  Value best;

  void add(const Value& v, Aggregate agg) {
    if (is_null(v)) return;
    ++count;
    if (auto n = as_number(v)) sum += *n;
    if (is_null(best) || (agg == Aggregate::kMin && compare_values(v, best) < 0) ||
        (agg == Aggregate::kMax && compare_values(v, best) > 0)) {
      best = v;
    }
  }

  Value result(Aggregate agg) const {
    switch (agg) {
      case Aggregate::kCount: return static_cast<double>(count);
      case Aggregate::kSum: return count ? Value(sum) : Value();
      case Aggregate::kMean: return count ? Value(sum / static_cast<double>(count)) : Value();
      case Aggregate::kMin:
      case Aggregate::kMax: return best;
    }
    return {};
  }
};

inline const Column& require_column(const Dataset& ds, std::string_view name, std::string_view where) {
  const Column* c = ds.find(name);
  if (!c) {
    throw Error(errc::kUnknownColumn, "unknown column '" + std::string(name) + "' in " + std::string(where),
                {{"column", name}, {"where", where}});
  }
  return *c;
}

}  // namespace detail

/// Checks the query against the dataset schema and returns a normalized copy
/// (temporal literals as dates). Throws UnknownColumn, TypeMismatch,
/// InvalidBinCount or InvalidQuery.
inline ChartQuery check_query(const Dataset& ds, const ChartQuery& query) {
  using detail::require_column;
  ChartQuery q = query;
  if (!q.source.empty() && q.source != ds.id) {
    throw Error(errc::kInvalidQuery, "query targets dataset '" + q.source + "'", {{"source", q.source}});
  }
  if (q.projections.empty()) throw Error(errc::kInvalidQuery, "query has no projections");
  for (const auto& p : q.projections) {
    const Column& c = require_column(ds, p.column, "projection");
    if (!p.aggregate) continue;
    bool ok = true;
    switch (*p.aggregate) {
      case Aggregate::kSum:
      case Aggregate::kMean: ok = c.ctype == ColumnType::kQuantitative; break;
      case Aggregate::kMin:
      case Aggregate::kMax: ok = c.ctype != ColumnType::kCategorical; break;
      case Aggregate::kCount: break;
    }
    if (!ok) {
      throw Error(errc::kTypeMismatch,
                  std::string(to_string(*p.aggregate)) + " over " + std::string(to_string(c.ctype)) + " column '" +
                      c.name + "'",
                  {{"column", c.name}});
    }
  }
  for (auto& f : q.filters) {
    const Column& c = require_column(ds, f.column, "filter");
    f.value = detail::coerce_literal(f.value, c.ctype);
    f.upper = detail::coerce_literal(f.upper, c.ctype);
    bool ordered = f.op != FilterOp::kEq && f.op != FilterOp::kNe;
    if (ordered && c.ctype == ColumnType::kCategorical) {
      throw Error(errc::kTypeMismatch, "ordered comparison on categorical column '" + c.name + "'",
                  {{"column", c.name}, {"op", to_string(f.op)}});
    }
    if (!detail::literal_matches(f.value, c.ctype) ||
        (f.op == FilterOp::kInRange && !detail::literal_matches(f.upper, c.ctype))) {
      throw Error(errc::kTypeMismatch, "filter literal does not match column '" + c.name + "'",
                  {{"column", c.name}, {"op", to_string(f.op)}});
    }
  }
  if (q.bins) {
    const Column& c = require_column(ds, q.bins->column, "bin");
    if (q.bins->bin_count < 1) {
      throw Error(errc::kInvalidBinCount, "bin count must be at least 1", {{"bin_count", q.bins->bin_count}});
    }
    if (c.ctype != ColumnType::kQuantitative) {
      throw Error(errc::kTypeMismatch, "cannot bin non-quantitative column '" + c.name + "'", {{"column", c.name}});
    }
  }
  if (q.sort) {
    require_column(ds, q.sort->column, "sort");
    bool projected = std::any_of(q.projections.begin(), q.projections.end(), [&](const Projection& p) {
      return p.column == q.sort->column && p.aggregate == q.sort->aggregate;
    });
    if (!projected) {
      throw Error(errc::kInvalidQuery, "sort key '" + q.sort->column + "' is not among the projections",
                  {{"column", q.sort->column}});
    }
  }
  if (q.limit && *q.limit == 0) throw Error(errc::kInvalidQuery, "limit must be positive");
  return q;
}

inline QueryResult execute_query_detailed(const Dataset& ds, const ChartQuery& query) {
  const ChartQuery q = check_query(ds, query);
  QueryResult out;
  for (const auto& p : q.projections) out.table.column_names.push_back(p.output_name());

  // 1. filter
  std::vector<std::size_t> rows;
  std::vector<const Column*> filter_cols;
  for (const auto& f : q.filters) filter_cols.push_back(ds.find(f.column));
  for (std::size_t r = 0; r < ds.row_count; ++r) {
    bool keep = true;
    for (std::size_t i = 0; i < q.filters.size() && keep; ++i) keep = detail::passes(filter_cols[i]->cells[r], q.filters[i]);
    if (keep) rows.push_back(r);
  }

  // 2. bin: rows without a value in the binned column cannot be placed
  const Column* bin_col = q.bins ? ds.find(q.bins->column) : nullptr;
  std::vector<Value> bin_start(bin_col ? ds.row_count : 0);
  if (bin_col) {
    std::vector<std::size_t> kept;
    double lo = 0, hi = 0;
    for (auto r : rows) {
      if (auto v = as_number(bin_col->cells[r])) {
        if (kept.empty()) lo = hi = *v;
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
        kept.push_back(r);
      }
    }
    rows = std::move(kept);
    if (!rows.empty()) {
      BinLayout layout{lo, (hi - lo) / q.bins->bin_count, q.bins->bin_count};
      for (auto r : rows) bin_start[r] = layout.start_of(layout.index_of(std::get<double>(bin_col->cells[r])));
      out.bins = layout;
    }
  }

  std::vector<const Column*> proj_cols;
  for (const auto& p : q.projections) proj_cols.push_back(ds.find(p.column));
  auto key_cell = [&](std::size_t i, std::size_t r) -> const Value& {
    if (bin_col && proj_cols[i] == bin_col) return bin_start[r];
    return proj_cols[i]->cells[r];
  };

  // 3. group / aggregate
  if (q.has_aggregates()) {
    std::vector<std::size_t> key_idx;
    for (std::size_t i = 0; i < q.projections.size(); ++i) {
      if (!q.projections[i].aggregate) key_idx.push_back(i);
    }
    std::map<std::vector<Value>, std::size_t, detail::KeyLess> lookup;
    std::vector<std::vector<Value>> keys;
    std::vector<std::vector<detail::Accumulator>> accs;
    auto group_for = [&](std::vector<Value> key) {
      auto [it, inserted] = lookup.try_emplace(key, keys.size());
      if (inserted) {
        keys.push_back(std::move(key));
        accs.emplace_back(q.projections.size());
      }
      return it->second;
    };
    if (key_idx.empty()) group_for({});
    for (auto r : rows) {
      std::vector<Value> key;
      key.reserve(key_idx.size());
      for (auto i : key_idx) key.push_back(key_cell(i, r));
      auto g = group_for(std::move(key));
      for (std::size_t i = 0; i < q.projections.size(); ++i) {
        if (q.projections[i].aggregate) accs[g][i].add(proj_cols[i]->cells[r], *q.projections[i].aggregate);
      }
    }
    for (std::size_t g = 0; g < keys.size(); ++g) {
      std::vector<Value> row;
      row.reserve(q.projections.size());
      std::size_t k = 0;
      for (std::size_t i = 0; i < q.projections.size(); ++i) {
        if (q.projections[i].aggregate) {
          row.push_back(accs[g][i].result(*q.projections[i].aggregate));
        } else {
          row.push_back(keys[g][k++]);
        }
      }
      out.table.rows.push_back(std::move(row));
    }
  } else {
    for (auto r : rows) {
      std::vector<Value> row;
      row.reserve(q.projections.size());
      for (std::size_t i = 0; i < q.projections.size(); ++i) row.push_back(key_cell(i, r));
      out.table.rows.push_back(std::move(row));
    }
  }

  // 4. sort (stable, nulls last in either direction)
  if (q.sort) {
    std::size_t col = 0;
    for (std::size_t i = 0; i < q.projections.size(); ++i) {
      if (q.projections[i].column == q.sort->column && q.projections[i].aggregate == q.sort->aggregate) {
        col = i;
        break;
      }
    }
    bool desc = q.sort->direction == SortDirection::kDescending;
    std::stable_sort(out.table.rows.begin(), out.table.rows.end(), [&](const auto& a, const auto& b) {
      bool an = is_null(a[col]), bn = is_null(b[col]);
      if (an || bn) return !an && bn;
      int c = compare_values(a[col], b[col]);
      return desc ? c > 0 : c < 0;
    });
  }

  // 5. limit
  if (q.limit && out.table.rows.size() > *q.limit) out.table.rows.resize(*q.limit);
  return out;
}

inline DataTable execute_query(const Dataset& ds, const ChartQuery& query) {
  return execute_query_detailed(ds, query).table;
}

/// The whole dataset as a table, rows in source order.
inline DataTable to_table(const Dataset& ds) {
  DataTable t;
  for (const auto& c : ds.columns) t.column_names.push_back(c.name);
  t.rows.resize(ds.row_count);
  for (std::size_t r = 0; r < ds.row_count; ++r) {
    for (const auto& c : ds.columns) t.rows[r].push_back(c.cells[r]);
  }
  return t;
}

}  // namespace incanvas::data
