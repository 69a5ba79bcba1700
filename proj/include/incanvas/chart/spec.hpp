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
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/common/error.hpp"
#include "incanvas/data/query.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::chart {

inline constexpr int kSpecVersion = 1;

enum class Mark { kScatter, kBar, kLine, kHistogram, kHeatmap };
enum class Channel { kX, kY, kColor, kSize, kLabel };
enum class Scale { kLinear, kLog };

inline constexpr Channel kAllChannels[] = {Channel::kX, Channel::kY, Channel::kColor, Channel::kSize,
                                           Channel::kLabel};

inline std::string_view to_string(Mark m) {
  switch (m) {
    case Mark::kScatter: return "scatter";
    case Mark::kBar: return "bar";
    case Mark::kLine: return "line";
    case Mark::kHistogram: return "histogram";
    case Mark::kHeatmap: return "heatmap";
  }
  return "scatter";
}

inline std::optional<Mark> mark_from_string(std::string_view s) {
  if (s == "scatter" || s == "point" || s == "scatterplot") return Mark::kScatter;
  if (s == "bar") return Mark::kBar;
  if (s == "line") return Mark::kLine;
  if (s == "histogram") return Mark::kHistogram;
  if (s == "heatmap" || s == "rect") return Mark::kHeatmap;
  return std::nullopt;
}

inline std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::kX: return "x";
    case Channel::kY: return "y";
    case Channel::kColor: return "color";
    case Channel::kSize: return "size";
    case Channel::kLabel: return "label";
  }
  return "x";
}

inline std::optional<Channel> channel_from_string(std::string_view s) {
  for (auto c : kAllChannels) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

inline bool is_optional_channel(Channel c) { return c == Channel::kColor || c == Channel::kSize || c == Channel::kLabel; }

inline std::string_view to_string(Scale s) { return s == Scale::kLog ? "log" : "linear"; }

struct Encoding {
  std::string column;
  std::optional<data::Aggregate> aggregate;
  std::optional<Scale> scale;
  bool operator==(const Encoding&) const = default;
};

struct FilterTransform {
  std::string column;
  data::FilterOp op = data::FilterOp::kEq;
  data::Value value;
  data::Value upper;  // in-range only
  bool operator==(const FilterTransform&) const = default;
};

struct BinTransform {
  std::string column;
  int bin_count = 10;
  bool operator==(const BinTransform&) const = default;
};

/// Labels the top and bottom fraction `p` of rows, ranked by the value
/// plotted on `channel`.
struct TopKLabelTransform {
  Channel channel = Channel::kY;
  double p = 0.1;
  bool operator==(const TopKLabelTransform&) const = default;
};

using Transform = std::variant<FilterTransform, BinTransform, TopKLabelTransform>;

/// Declarative description of one chart. `columns` carries the variable list
/// of a correlation-matrix heatmap and is empty for every other chart.
struct ChartSpec {
  Mark mark = Mark::kScatter;
  std::map<Channel, Encoding> encodings;
  std::vector<std::string> columns;
  std::vector<Transform> transforms;
  std::string title;
  int spec_version = kSpecVersion;

  const Encoding* encoding(Channel c) const {
    auto it = encodings.find(c);
    return it == encodings.end() ? nullptr : &it->second;
  }
  bool is_matrix() const { return mark == Mark::kHeatmap && !columns.empty(); }
  bool operator==(const ChartSpec&) const = default;
};

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const Transform& t) {
  nlohmann::ordered_json j;
  if (auto f = std::get_if<FilterTransform>(&t)) {
    j["type"] = "filter";
    j["column"] = f->column;
    j["op"] = std::string(data::to_string(f->op));
    j["value"] = data::value_to_json(f->value);
    if (f->op == data::FilterOp::kInRange) j["upper"] = data::value_to_json(f->upper);
  } else if (auto b = std::get_if<BinTransform>(&t)) {
    j["type"] = "bin";
    j["column"] = b->column;
    j["bin_count"] = b->bin_count;
  } else {
    const auto& k = std::get<TopKLabelTransform>(t);
    j["type"] = "topk_label";
    j["channel"] = std::string(to_string(k.channel));
    j["p"] = k.p;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const ChartSpec& spec) {
  nlohmann::ordered_json j;
  j["spec_version"] = spec.spec_version;
  j["mark"] = std::string(to_string(spec.mark));
  j["title"] = spec.title;
  nlohmann::ordered_json enc = nlohmann::ordered_json::object();
  for (const auto& [channel, e] : spec.encodings) {
    nlohmann::ordered_json ej;
    ej["column"] = e.column;
    if (e.aggregate) ej["aggregate"] = std::string(data::to_string(*e.aggregate));
    if (e.scale) ej["scale"] = std::string(to_string(*e.scale));
    enc[std::string(to_string(channel))] = std::move(ej);
  }
  j["encodings"] = std::move(enc);
  if (!spec.columns.empty()) j["columns"] = spec.columns;
  auto ts = nlohmann::ordered_json::array();
  for (const auto& t : spec.transforms) ts.push_back(to_json(t));
  j["transforms"] = std::move(ts);
  return j;
}

/// Canonical serialization; equal specs produce byte-equal strings.
inline std::string serialize(const ChartSpec& spec) { return to_json(spec).dump(); }

namespace detail {

[[noreturn]] inline void malformed(const std::string& path, const std::string& why) {
  throw Error(errc::kMalformedSpecJson, path + ": " + why, {{"path", path}});
}

template <typename Json>
std::string require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) malformed(path, "expected a string");
  return j.template get<std::string>();
}

template <typename Json>
data::Value literal_from_json(const Json& j, const std::string& path) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number()) return j.template get<double>();
  if (j.is_string()) return j.template get<std::string>();
  if (j.is_boolean()) return std::string(j.template get<bool>() ? "true" : "false");
  malformed(path, "expected a number, string or null");
}

template <typename Json>
Encoding encoding_from_json(const Json& j, const std::string& path) {
  Encoding e;
  if (j.is_string()) {
    e.column = j.template get<std::string>();
    return e;
  }
  if (!j.is_object()) malformed(path, "expected an object or column name");
  if (!j.contains("column")) malformed(path, "missing 'column'");
  e.column = require_string(j["column"], path + ".column");
  if (j.contains("aggregate") && !j["aggregate"].is_null()) {
    auto a = data::aggregate_from_string(require_string(j["aggregate"], path + ".aggregate"));
    if (!a) malformed(path + ".aggregate", "unknown aggregate");
    e.aggregate = a;
  }
  if (j.contains("scale") && !j["scale"].is_null()) {
    auto s = require_string(j["scale"], path + ".scale");
    if (s == "log") {
      e.scale = Scale::kLog;
    } else if (s == "linear") {
      e.scale = Scale::kLinear;
    } else {
      malformed(path + ".scale", "unknown scale");
    }
  }
  return e;
}

template <typename Json>
Transform transform_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type")) malformed(path, "expected an object with 'type'");
  auto type = require_string(j["type"], path + ".type");
  if (type == "filter") {
    FilterTransform f;
    if (!j.contains("column")) malformed(path, "missing 'column'");
    f.column = require_string(j["column"], path + ".column");
    auto op = data::filter_op_from_string(require_string(j.value("op", Json("=")), path + ".op"));
    if (!op) malformed(path + ".op", "unknown operator");
    f.op = *op;
    if (j.contains("value")) f.value = literal_from_json(j["value"], path + ".value");
    if (j.contains("upper")) f.upper = literal_from_json(j["upper"], path + ".upper");
    return f;
  }
  if (type == "bin") {
    BinTransform b;
    if (!j.contains("column")) malformed(path, "missing 'column'");
    b.column = require_string(j["column"], path + ".column");
    if (j.contains("bin_count")) {
      if (!j["bin_count"].is_number_integer()) malformed(path + ".bin_count", "expected an integer");
      b.bin_count = j["bin_count"].template get<int>();
    }
    return b;
  }
  if (type == "topk_label" || type == "topk-label") {
    TopKLabelTransform k;
    if (j.contains("channel")) {
      auto c = channel_from_string(require_string(j["channel"], path + ".channel"));
      if (!c) malformed(path + ".channel", "unknown channel");
      k.channel = *c;
    }
    if (!j.contains("p") || !j["p"].is_number()) malformed(path + ".p", "expected a number");
    k.p = j["p"].template get<double>();
    return k;
  }
  malformed(path + ".type", "unknown transform type '" + type + "'");
}

}  // namespace detail

/// Reads a spec from JSON. Tolerant of shorthand (an encoding given as a bare
/// column name, a missing spec_version) but rejects unknown versions, marks,
/// channels and transform types. The result is not validated against any
/// dataset.
template <typename Json>
ChartSpec spec_from_json(const Json& j) {
  using detail::malformed;
  if (!j.is_object()) malformed("$", "expected an object");
  ChartSpec spec;
  if (j.contains("spec_version")) {
    if (!j["spec_version"].is_number_integer() || j["spec_version"].template get<long long>() != kSpecVersion) {
      throw Error(errc::kUnsupportedSpecVersion, "unsupported spec_version " + j["spec_version"].dump(),
                  {{"spec_version", nlohmann::json::parse(j["spec_version"].dump())}});
    }
  }
  if (!j.contains("mark")) malformed("$.mark", "missing");
  auto mark = mark_from_string(detail::require_string(j["mark"], "$.mark"));
  if (!mark) malformed("$.mark", "unknown mark");
  spec.mark = *mark;
  if (j.contains("title") && !j["title"].is_null()) spec.title = detail::require_string(j["title"], "$.title");
  if (j.contains("encodings")) {
    const auto& enc = j["encodings"];
    if (!enc.is_object()) malformed("$.encodings", "expected an object");
    for (auto it = enc.begin(); it != enc.end(); ++it) {
      auto channel = channel_from_string(it.key());
      std::string path = "$.encodings." + it.key();
      if (!channel) malformed(path, "unknown channel");
      if (it.value().is_null()) continue;
      spec.encodings[*channel] = detail::encoding_from_json(it.value(), path);
    }
  }
  if (j.contains("columns") && !j["columns"].is_null()) {
    const auto& cols = j["columns"];
    if (!cols.is_array()) malformed("$.columns", "expected an array");
    for (std::size_t i = 0; i < cols.size(); ++i) {
      spec.columns.push_back(detail::require_string(cols[i], "$.columns[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("transforms") && !j["transforms"].is_null()) {
    const auto& ts = j["transforms"];
    if (!ts.is_array()) malformed("$.transforms", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      spec.transforms.push_back(detail::transform_from_json(ts[i], "$.transforms[" + std::to_string(i) + "]"));
    }
  }
  return spec;
}

inline ChartSpec deserialize_spec(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(errc::kMalformedSpecJson, e.what(), {{"position", e.byte}});
  }
  return spec_from_json(j);
}

}  // namespace incanvas::chart
