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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/chart/spec.hpp"
#include "incanvas/common/text.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::chart {

enum class IssueCode { kUnknownColumn, kMissingChannel, kTypeMismatch, kBadTransform };

inline std::string_view to_string(IssueCode c) {
  switch (c) {
    case IssueCode::kUnknownColumn: return "UnknownColumn";
    case IssueCode::kMissingChannel: return "MissingChannel";
    case IssueCode::kTypeMismatch: return "TypeMismatch";
    case IssueCode::kBadTransform: return "BadTransform";
  }
  return "BadTransform";
}

struct ValidationIssue {
  IssueCode code;
  std::string path;  // "encodings.x", "encodings.y.aggregate", "columns[1]", "transforms[0].column", ...
  std::string message;
  std::optional<std::string> suggested_fix;
  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool valid() const { return issues.empty(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["valid"] = valid();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& i : issues) {
      nlohmann::ordered_json ij;
      ij["code"] = std::string(to_string(i.code));
      ij["path"] = i.path;
      ij["message"] = i.message;
      ij["suggested_fix"] = i.suggested_fix ? nlohmann::ordered_json(*i.suggested_fix) : nlohmann::ordered_json();
      arr.push_back(std::move(ij));
    }
    j["issues"] = std::move(arr);
    return j;
  }
};

inline constexpr std::size_t kMaxFuzzyDistance = 2;

/// Conservative column-name repair: a unique case-insensitive exact match,
/// otherwise the unique candidate at minimum edit distance (case-folded)
/// when that distance is at most 2. Ties mean no suggestion.
inline std::optional<std::string> suggest_column(std::string_view name, const data::Dataset& ds) {
  const data::Column* ci = nullptr;
  int ci_hits = 0;
  for (const auto& c : ds.columns) {
    if (text::iequals(c.name, name)) {
      ci = &c;
      ++ci_hits;
    }
  }
  if (ci_hits == 1) return ci->name;
  if (ci_hits > 1) return std::nullopt;

  std::string needle = text::to_lower(name);
  std::size_t best = kMaxFuzzyDistance + 1;
  const data::Column* winner = nullptr;
  bool tie = false;
  for (const auto& c : ds.columns) {
    std::size_t d = text::edit_distance(needle, text::to_lower(c.name));
    if (d < best) {
      best = d;
      winner = &c;
      tie = false;
    } else if (d == best) {
      tie = true;
    }
  }
  if (!winner || tie || best > kMaxFuzzyDistance) return std::nullopt;
  return winner->name;
}

namespace detail {

/// Type of the value an encoding puts on its channel.
inline data::ColumnType encoded_type(const Encoding& e, const data::Column& col) {
  if (!e.aggregate) return col.ctype;
  switch (*e.aggregate) {
    case data::Aggregate::kCount:
    case data::Aggregate::kSum:
    case data::Aggregate::kMean: return data::ColumnType::kQuantitative;
    case data::Aggregate::kMin:
    case data::Aggregate::kMax: return col.ctype;
  }
  return col.ctype;
}

inline bool aggregate_fits(data::Aggregate a, data::ColumnType t) {
  switch (a) {
    case data::Aggregate::kSum:
    case data::Aggregate::kMean: return t == data::ColumnType::kQuantitative;
    case data::Aggregate::kMin:
    case data::Aggregate::kMax: return t != data::ColumnType::kCategorical;
    case data::Aggregate::kCount: return true;
  }
  return false;
}

class Validator {
 public:
  Validator(const ChartSpec& spec, const data::Dataset& ds) : spec_(spec), ds_(ds) {}

  ValidationReport run() {
    check_required_channels();
    for (const auto& [channel, enc] : spec_.encodings) check_encoding(channel, enc);
    if (spec_.is_matrix()) check_matrix_columns();
    for (std::size_t i = 0; i < spec_.transforms.size(); ++i) check_transform(i);
    return std::move(report_);
  }

 private:
  void add(IssueCode code, std::string path, std::string message, std::optional<std::string> fix = std::nullopt) {
    report_.issues.push_back({code, std::move(path), std::move(message), std::move(fix)});
  }

  static std::string channel_path(Channel c) { return "encodings." + std::string(to_string(c)); }

  // Unknown names resolve to their suggested fix so that every later check
  // sees the column a repair pass would substitute.
  const data::Column* resolve(const std::string& column, const std::string& path) {
    if (const auto* c = ds_.find(column)) return c;
    auto fix = suggest_column(column, ds_);
    add(IssueCode::kUnknownColumn, path, "unknown column '" + column + "'", fix);
    return fix ? ds_.find(*fix) : nullptr;
  }

  void check_required_channels() {
    std::vector<Channel> required;
    switch (spec_.mark) {
      case Mark::kScatter:
      case Mark::kLine:
      case Mark::kBar: required = {Channel::kX, Channel::kY}; break;
      case Mark::kHistogram: required = {Channel::kX}; break;
      case Mark::kHeatmap:
        if (spec_.is_matrix()) {
          if (spec_.columns.size() < 2) {
            add(IssueCode::kMissingChannel, "columns", "correlation heatmap needs at least two columns");
          }
        } else {
          required = {Channel::kX, Channel::kY};
        }
        break;
    }
    for (auto c : required) {
      if (!spec_.encoding(c)) {
        add(IssueCode::kMissingChannel, channel_path(c),
            std::string(to_string(spec_.mark)) + " requires a " + std::string(to_string(c)) + " encoding");
      }
    }
  }

  // Checks one encoding as it will look after the fixes suggested here are
  // applied. Channels that survive repair are recorded in effective_.
  void check_encoding(Channel channel, const Encoding& enc) {
    const std::string path = channel_path(channel);
    if (spec_.mark == Mark::kHistogram && channel == Channel::kY) {
      add(IssueCode::kTypeMismatch, path, "histogram takes only an x encoding");
      return;
    }
    if (spec_.is_matrix() && (channel == Channel::kX || channel == Channel::kY)) {
      add(IssueCode::kTypeMismatch, path, "correlation heatmap takes its variables from 'columns'");
      return;
    }
    const data::Column* col = resolve(enc.column, path);
    if (!col) return;
    auto fix_for = [&] { return std::string(col->ctype == data::ColumnType::kQuantitative ? "mean" : "count"); };

    Encoding eff = enc;
    eff.column = col->name;
    if (spec_.mark == Mark::kHistogram && channel == Channel::kX && eff.aggregate) {
      add(IssueCode::kTypeMismatch, path + ".aggregate", "histogram x is binned, not aggregated");
      eff.aggregate.reset();
    } else if (eff.aggregate && !aggregate_fits(*eff.aggregate, col->ctype)) {
      add(IssueCode::kTypeMismatch, path + ".aggregate",
          std::string(data::to_string(*eff.aggregate)) + " cannot summarize " +
              std::string(data::to_string(col->ctype)) + " column '" + col->name + "'",
          fix_for());
      eff.aggregate = data::aggregate_from_string(fix_for());
    } else if (spec_.mark == Mark::kBar && channel == Channel::kY && !eff.aggregate) {
      add(IssueCode::kTypeMismatch, path + ".aggregate", "bar y needs an aggregate", fix_for());
      eff.aggregate = data::aggregate_from_string(fix_for());
    }

    const bool quantitative = encoded_type(eff, *col) == data::ColumnType::kQuantitative;
    if (eff.scale == Scale::kLog && !quantitative) {
      add(IssueCode::kTypeMismatch, path + ".scale", "log scale needs a quantitative column");
      eff.scale.reset();
    }

    const data::ColumnType t = encoded_type(eff, *col);
    std::optional<std::string> fatal;
    switch (spec_.mark) {
      case Mark::kScatter:
        if ((channel == Channel::kX || channel == Channel::kY) && t == data::ColumnType::kCategorical) {
          fatal = "scatter axes need quantitative or temporal columns";
        }
        break;
      case Mark::kLine:
        if (channel == Channel::kY && !quantitative) fatal = "line y must be quantitative";
        break;
      case Mark::kHistogram:
        if (channel == Channel::kX && !quantitative) fatal = "histogram x must be quantitative";
        break;
      case Mark::kBar:
      case Mark::kHeatmap: break;
    }
    if (!fatal && channel == Channel::kSize && !quantitative) fatal = "size must be quantitative";
    if (fatal) {
      add(IssueCode::kTypeMismatch, path, *fatal);
      return;
    }
    effective_.emplace(channel, std::make_pair(eff, col));
  }

  void check_matrix_columns() {
    for (std::size_t i = 0; i < spec_.columns.size(); ++i) {
      std::string path = "columns[" + std::to_string(i) + "]";
      const data::Column* col = resolve(spec_.columns[i], path);
      if (col && col->ctype != data::ColumnType::kQuantitative) {
        add(IssueCode::kTypeMismatch, path, "correlation needs quantitative column '" + col->name + "'");
      }
    }
  }

  void check_transform(std::size_t i) {
    const std::string path = "transforms[" + std::to_string(i) + "]";
    const Transform& t = spec_.transforms[i];
    if (auto f = std::get_if<FilterTransform>(&t)) {
      const data::Column* col = resolve(f->column, path + ".column");
      if (!col) return;
      bool ordered = f->op != data::FilterOp::kEq && f->op != data::FilterOp::kNe;
      if (ordered && col->ctype == data::ColumnType::kCategorical) {
        add(IssueCode::kBadTransform, path, "ordered comparison on categorical column '" + col->name + "'");
        return;
      }
      auto fits = [&](const data::Value& v) {
        switch (col->ctype) {
          case data::ColumnType::kQuantitative: return std::holds_alternative<double>(v);
          case data::ColumnType::kCategorical: return std::holds_alternative<std::string>(v);
          case data::ColumnType::kTemporal: {
            auto s = std::get_if<std::string>(&v);
            return s && data::parse_date(*s).has_value();
          }
        }
        return false;
      };
      if (!fits(f->value) || (f->op == data::FilterOp::kInRange && !fits(f->upper))) {
        add(IssueCode::kBadTransform, path, "filter literal does not match column '" + col->name + "'");
      }
    } else if (auto b = std::get_if<BinTransform>(&t)) {
      const data::Column* col = resolve(b->column, path + ".column");
      if (!col) return;
      if (kept_bin_) {
        add(IssueCode::kBadTransform, path, "only one bin transform is supported");
      } else if (b->bin_count < 1) {
        add(IssueCode::kBadTransform, path, "bin_count must be at least 1");
      } else if (col->ctype != data::ColumnType::kQuantitative) {
        add(IssueCode::kBadTransform, path, "cannot bin non-quantitative column '" + col->name + "'");
      } else {
        kept_bin_ = true;
      }
    } else {
      const auto& k = std::get<TopKLabelTransform>(t);
      if (!(k.p > 0.0 && k.p < 0.5)) {
        add(IssueCode::kBadTransform, path, "label fraction must lie in (0, 0.5)");
        return;
      }
      if (spec_.is_matrix()) {
        add(IssueCode::kBadTransform, path, "correlation heatmaps cannot carry labels");
        return;
      }
      auto it = effective_.find(k.channel);
      if (it == effective_.end()) {
        add(IssueCode::kBadTransform, path, "label channel '" + std::string(to_string(k.channel)) + "' is not encoded");
      } else if (encoded_type(it->second.first, *it->second.second) != data::ColumnType::kQuantitative) {
        add(IssueCode::kBadTransform, path, "label channel must be quantitative");
      }
    }
  }

  const ChartSpec& spec_;
  const data::Dataset& ds_;
  ValidationReport report_;
  std::map<Channel, std::pair<Encoding, const data::Column*>> effective_;
  bool kept_bin_ = false;
};

}  // namespace detail

/// Reports every problem in `spec` relative to `dataset`; never throws.
inline ValidationReport validate_spec(const ChartSpec& spec, const data::Dataset& dataset) {
  return detail::Validator(spec, dataset).run();
}

}  // namespace incanvas::chart
