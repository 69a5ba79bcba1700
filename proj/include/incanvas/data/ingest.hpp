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

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "incanvas/common/error.hpp"
#include "incanvas/common/ids.hpp"
#include "incanvas/common/text.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::data {

using Record = std::vector<std::string>;

/// RFC-4180 reader: comma delimiter, double-quote quoting with "" escapes,
/// LF or CRLF record ends, quoted fields may span lines. A leading UTF-8 BOM
/// is dropped and zero-length lines are skipped.
inline std::vector<Record> parse_csv(std::string_view in) {
  if (in.substr(0, 3) == "\xEF\xBB\xBF") in.remove_prefix(3);
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // anything consumed for the current record
  std::size_t quote_open_at = 0;

  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    if (field_started) {
      end_field();
      records.push_back(std::move(current));
    }
    current.clear();
    field.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < in.size(); ++i) {
    char c = in[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < in.size() && in[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty()) {
          in_quotes = true;
          quote_open_at = i;
        } else {
          field.push_back(c);
        }
        field_started = true;
        break;
      case ',':
        field_started = true;
        end_field();
        break;
      case '\r':
        if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field_started = true;
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(errc::kMalformedCsv, "unterminated quoted field", {{"offset", quote_open_at}});
  }
  end_record();
  return records;
}

inline bool is_null_text(std::string_view cell) { return text::trim(cell).empty(); }

/// Quantitative iff at least 90% of non-null cells parse as numbers; else
/// temporal iff at least 90% parse as ISO dates; else categorical. A column
/// without evidence (no non-null cells) is categorical.
template <typename Range>
ColumnType infer_column_type(const Range& cells) {
  std::size_t non_null = 0, numeric = 0, dates = 0;
  for (const auto& cell : cells) {
    std::string_view s(cell);
    if (is_null_text(s)) continue;
    ++non_null;
    if (parse_number(s)) ++numeric;
    if (parse_date(s)) ++dates;
  }
  if (non_null == 0) return ColumnType::kCategorical;
  // integer form of ratio >= 0.9
  if (numeric * 10 >= non_null * 9) return ColumnType::kQuantitative;
  if (dates * 10 >= non_null * 9) return ColumnType::kTemporal;
  return ColumnType::kCategorical;
}

inline ColumnType infer_column_type(std::initializer_list<std::string_view> cells) {
  return infer_column_type(std::span<const std::string_view>(cells.begin(), cells.size()));
}

/// Converts raw cell text to a typed cell for the given column type. Cells
/// that do not parse under the column's type become null.
inline Value normalize_cell(std::string_view raw, ColumnType type) {
  if (is_null_text(raw)) return std::monostate{};
  switch (type) {
    case ColumnType::kQuantitative:
      if (auto n = parse_number(raw)) return *n;
      return std::monostate{};
    case ColumnType::kTemporal:
      if (auto d = parse_date(raw)) return *d;
      return std::monostate{};
    case ColumnType::kCategorical:
      return std::string(raw);
  }
  return std::monostate{};
}

/// Parses a UTF-8 CSV document (header row first) into a typed Dataset.
inline Dataset ingest_csv(std::string_view raw, std::string name) {
  if (auto bad = text::find_invalid_utf8(raw); bad != std::string_view::npos) {
    throw Error(errc::kInvalidEncoding, "input is not valid UTF-8", {{"offset", bad}});
  }
  auto records = parse_csv(raw);
  if (records.empty()) throw Error(errc::kEmptyInput, "no header row");

  const Record& header = records.front();
  std::set<std::string, std::less<>> seen;
  Dataset ds;
  ds.id = IdGenerator::next("ds");
  ds.name = std::move(name);
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string col(text::trim(header[c]));
    if (!seen.insert(col).second) {
      throw Error(errc::kDuplicateHeader, "duplicate column name '" + col + "'", {{"column", col}, {"index", c}});
    }
    ds.columns.push_back(Column{std::move(col), ColumnType::kCategorical, {}});
  }

  const std::size_t width = header.size();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw Error(errc::kRaggedRows,
                  "row " + std::to_string(r) + " has " + std::to_string(records[r].size()) + " fields, expected " +
                      std::to_string(width),
                  {{"row", r}, {"expected", width}, {"found", records[r].size()}});
    }
  }
  ds.row_count = records.size() - 1;

  std::vector<std::string_view> raw_cells(ds.row_count);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t r = 0; r < ds.row_count; ++r) raw_cells[r] = records[r + 1][c];
    Column& col = ds.columns[c];
    col.ctype = infer_column_type(raw_cells);
    col.cells.reserve(ds.row_count);
    for (auto cell : raw_cells) col.cells.push_back(normalize_cell(cell, col.ctype));
  }
  return ds;
}

}  // namespace incanvas::data
