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

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/common/text.hpp"

namespace incanvas::data {

/// Calendar date (proleptic Gregorian), the cell type of temporal columns.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

/// A cell: null, number, text or date.
using Value = std::variant<std::monostate, double, std::string, Date>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
inline const double* as_number(const Value& v) { return std::get_if<double>(&v); }

enum class ColumnType { kQuantitative, kCategorical, kTemporal };

inline std::string_view to_string(ColumnType t) {
  switch (t) {
    case ColumnType::kQuantitative: return "quantitative";
    case ColumnType::kCategorical: return "categorical";
    case ColumnType::kTemporal: return "temporal";
  }
  return "categorical";
}

inline std::optional<ColumnType> column_type_from_string(std::string_view s) {
  if (s == "quantitative") return ColumnType::kQuantitative;
  if (s == "categorical") return ColumnType::kCategorical;
  if (s == "temporal") return ColumnType::kTemporal;
  return std::nullopt;
}

/// Parses a numeric-looking cell. Strips, in order: surrounding whitespace,
/// one leading "$", one trailing "%", and commas that sit strictly between
/// two digits. The rest must be a complete finite decimal literal.
inline std::optional<double> parse_number(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (!s.empty() && s.front() == '$') s.remove_prefix(1);
  if (!s.empty() && s.back() == '%') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  std::string cleaned;
  cleaned.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ',') {
      bool interior = i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                      std::isdigit(static_cast<unsigned char>(s[i + 1]));
      if (!interior) return std::nullopt;
      continue;
    }
    cleaned.push_back(c);
  }
  const char* first = cleaned.data();
  const char* last = first + cleaned.size();
  if (*first == '+') ++first;
  double out = 0;
  auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) return std::nullopt;
  return out;
}

inline bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

/// Accepts ISO-8601 calendar dates `YYYY-MM-DD`, optionally followed by a
/// `T` or space and a time of day, which is dropped.
inline std::optional<Date> parse_date(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (s.size() < 10) return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
      out = out * 10 + (s[i] - '0');
    }
    return true;
  };
  Date d;
  if (!digits(0, 4, d.year) || s[4] != '-' || !digits(5, 2, d.month) || s[7] != '-' || !digits(8, 2, d.day)) {
    return std::nullopt;
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
  if (s.size() > 10) {
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    int hh = 0, mm = 0;
    if (s.size() < 16 || !digits(11, 2, hh) || s[13] != ':' || !digits(14, 2, mm) || hh > 23 || mm > 59) {
      return std::nullopt;
    }
  }
  return d;
}

/// Total order used for sorting and grouping: null < number < text < date,
/// natural order within a kind. Columns never mix kinds after ingestion.
inline int compare_values(const Value& a, const Value& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (auto x = std::get_if<double>(&a)) {
    double y = std::get<double>(b);
    return *x < y ? -1 : (*x > y ? 1 : 0);
  }
  if (auto x = std::get_if<std::string>(&a)) {
    int c = x->compare(std::get<std::string>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (auto x = std::get_if<Date>(&a)) {
    auto c = *x <=> std::get<Date>(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return 0;
}

/// JSON encoding of a cell: null, number, string; dates as ISO strings.
inline nlohmann::ordered_json value_to_json(const Value& v) {
  if (auto n = std::get_if<double>(&v)) return *n;
  if (auto s = std::get_if<std::string>(&v)) return *s;
  if (auto d = std::get_if<Date>(&v)) return d->iso();
  return nullptr;
}

inline std::string value_to_text(const Value& v) {
  if (auto n = std::get_if<double>(&v)) return text::format_significant(*n, 6);
  if (auto s = std::get_if<std::string>(&v)) return *s;
  if (auto d = std::get_if<Date>(&v)) return d->iso();
  return "null";
}

struct Column {
  std::string name;
  ColumnType ctype = ColumnType::kCategorical;
  std::vector<Value> cells;

  bool operator==(const Column&) const = default;
};

/// An ingested table. Immutable once built; shared as shared_ptr<const Dataset>.
struct Dataset {
  std::string id;
  std::string name;
  std::vector<Column> columns;
  std::size_t row_count = 0;

  const Column* find(std::string_view column) const {
    for (const auto& c : columns) {
      if (c.name == column) return &c;
    }
    return nullptr;
  }

  std::optional<std::size_t> index_of(std::string_view column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i].name == column) return i;
    }
    return std::nullopt;
  }

  bool operator==(const Dataset&) const = default;
};

/// Result of a query: ordered column names plus value rows.
struct DataTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<Value>> rows;

  std::optional<std::size_t> index_of(std::string_view column) const {
    for (std::size_t i = 0; i < column_names.size(); ++i) {
      if (column_names[i] == column) return i;
    }
    return std::nullopt;
  }

  bool operator==(const DataTable&) const = default;
};

}  // namespace incanvas::data
