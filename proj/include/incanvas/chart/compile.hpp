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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/chart/lower.hpp"
#include "incanvas/chart/spec.hpp"
#include "incanvas/chart/validate.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/data/query.hpp"
#include "incanvas/data/stats.hpp"

namespace incanvas::chart {

inline constexpr const char* kVegaLiteSchema = "https://vega.github.io/schema/vega-lite/v5.json";
inline constexpr const char* kLabelField = "__label";

/// A spec with its computed data and a Vega-Lite document carrying that data
/// inline.
struct RenderPayload {
  ChartSpec spec;
  data::DataTable data;
  std::string grammar_json;
  std::optional<data::QuantileLabels> labels;

  nlohmann::ordered_json to_json() const;
};

inline nlohmann::ordered_json table_to_json(const data::DataTable& t) {
  nlohmann::ordered_json j;
  j["columns"] = t.column_names;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& v : r) row.push_back(data::value_to_json(v));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline nlohmann::ordered_json RenderPayload::to_json() const {
  nlohmann::ordered_json j;
  j["spec"] = chart::to_json(spec);
  j["data"] = table_to_json(data);
  j["grammar"] = nlohmann::ordered_json::parse(grammar_json);
  return j;
}

namespace detail {

/// Vega-Lite treats '.', '[' and ']' in field names as path syntax.
inline std::string vl_field(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == '.' || c == '[' || c == ']' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string vl_type(data::ColumnType t) {
  switch (t) {
    case data::ColumnType::kQuantitative: return "quantitative";
    case data::ColumnType::kTemporal: return "temporal";
    case data::ColumnType::kCategorical: return "nominal";
  }
  return "nominal";
}

inline data::ColumnType projected_type(const data::Projection& p, const data::Dataset& ds) {
  const data::Column* c = ds.find(p.column);
  data::ColumnType base = c ? c->ctype : data::ColumnType::kCategorical;
  if (!p.aggregate) return base;
  if (*p.aggregate == data::Aggregate::kMin || *p.aggregate == data::Aggregate::kMax) return base;
  return data::ColumnType::kQuantitative;
}

inline nlohmann::ordered_json data_values(const data::DataTable& t, const std::vector<std::size_t>& rows,
                                          const std::vector<std::string>& labels) {
  auto values = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.column_names.size(); ++c) obj[t.column_names[c]] = data::value_to_json(t.rows[rows[i]][c]);
    if (!labels.empty()) obj[kLabelField] = labels[i];
    values.push_back(std::move(obj));
  }
  return values;
}

inline std::vector<std::size_t> all_rows(const data::DataTable& t) {
  std::vector<std::size_t> rows(t.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

inline std::string vl_mark(Mark m) {
  switch (m) {
    case Mark::kScatter: return "point";
    case Mark::kBar:
    case Mark::kHistogram: return "bar";
    case Mark::kLine: return "line";
    case Mark::kHeatmap: return "rect";
  }
  return "point";
}

inline nlohmann::ordered_json channel_def(const ChartSpec& spec, Channel channel, const data::Dataset& ds) {
  auto p = channel_projection(spec, channel);
  if (!p) return nullptr;
  nlohmann::ordered_json def;
  def["field"] = vl_field(p->output_name());
  def["type"] = vl_type(projected_type(*p, ds));
  def["title"] = p->aggregate ? p->output_name() : p->column;
  if (const Encoding* e = spec.encoding(channel); e && e->scale == Scale::kLog) def["scale"] = {{"type", "log"}};
  return def;
}

inline nlohmann::ordered_json matrix_grammar(const ChartSpec& spec, const data::DataTable& table) {
  nlohmann::ordered_json g;
  g["$schema"] = kVegaLiteSchema;
  if (!spec.title.empty()) g["title"] = spec.title;
  g["data"] = {{"values", data_values(table, all_rows(table), {})}};
  g["mark"] = {{"type", "rect"}};
  nlohmann::ordered_json enc;
  enc["x"] = {{"field", "column"}, {"type", "nominal"}, {"sort", spec.columns}, {"title", nullptr}};
  enc["y"] = {{"field", "row"}, {"type", "nominal"}, {"sort", spec.columns}, {"title", nullptr}};
  enc["color"] = {{"field", "r"},
                  {"type", "quantitative"},
                  {"scale", {{"domain", {-1, 1}}, {"scheme", "redblue"}}},
                  {"title", "Pearson r"}};
  g["encoding"] = std::move(enc);
  return g;
}

inline data::DataTable matrix_table(const ChartSpec& spec, const data::Dataset& ds) {
  auto m = data::correlation_matrix(ds, spec.columns);
  data::DataTable t;
  t.column_names = {"row", "column", "r"};
  for (std::size_t i = 0; i < m.columns.size(); ++i) {
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      data::Value r = m.r[i][j] ? data::Value(*m.r[i][j]) : data::Value();
      t.rows.push_back({m.columns[i], m.columns[j], r});
    }
  }
  return t;
}

}  // namespace detail

/// Executes the lowered query, applies any label pass and emits the grammar
/// document. Identical (spec, dataset) inputs give byte-identical output.
/// Correlation heatmaps carry a long-form (row, column, r) table instead of
/// query output.
inline RenderPayload compile_spec(const ChartSpec& spec, const data::Dataset& ds) {
  auto report = validate_spec(spec, ds);
  if (!report.valid()) {
    throw Error(errc::kInvalidSpec, "spec does not validate: " + report.issues.front().message,
                nlohmann::json::parse(report.to_json().dump()));
  }
  RenderPayload out;
  out.spec = spec;

  if (spec.is_matrix()) {
    out.data = detail::matrix_table(spec, ds);
    out.grammar_json = detail::matrix_grammar(spec, out.data).dump();
    return out;
  }

  const data::ChartQuery query = spec_to_query(spec);
  data::QueryResult result = data::execute_query_detailed(ds, query);
  out.data = std::move(result.table);

  std::vector<std::size_t> label_rows;
  std::vector<std::string> label_names;
  if (auto pass = label_pass(spec)) {
    auto field = out.data.index_of(pass->field);
    bool any_value = field && std::any_of(out.data.rows.begin(), out.data.rows.end(),
                                          [&](const auto& r) { return !data::is_null(r[*field]); });
    if (any_value) {
      out.labels = data::quantile_labels(out.data, pass->field, pass->p);
      for (auto r : out.labels->top) {
        label_rows.push_back(r);
        label_names.push_back("top");
      }
      for (auto r : out.labels->bottom) {
        label_rows.push_back(r);
        label_names.push_back("bottom");
      }
    }
  }

  nlohmann::ordered_json encoding = nlohmann::ordered_json::object();
  for (auto channel : kAllChannels) {
    auto def = detail::channel_def(spec, channel, ds);
    if (def.is_null()) continue;
    std::string key = channel == Channel::kLabel ? "tooltip" : std::string(to_string(channel));
    encoding[key] = std::move(def);
  }

  nlohmann::ordered_json transforms = nlohmann::ordered_json::array();
  if (spec.mark == Mark::kHistogram) {
    const std::string x = spec.encoding(Channel::kX)->column;
    double step = result.bins && result.bins->width > 0 ? result.bins->width : 1.0;
    encoding["x"]["bin"] = {{"binned", true}, {"step", step}};
    encoding["x2"] = {{"field", detail::vl_field(x + "__end")}};
    transforms.push_back({{"calculate", "datum[" + nlohmann::json(x).dump() + "] + " + nlohmann::json(step).dump()},
                          {"as", x + "__end"}});
  }

  nlohmann::ordered_json g;
  g["$schema"] = kVegaLiteSchema;
  if (!spec.title.empty()) g["title"] = spec.title;
  g["data"] = {{"values", detail::data_values(out.data, detail::all_rows(out.data), {})}};
  nlohmann::ordered_json mark = {{"type", detail::vl_mark(spec.mark)}};
  if (spec.mark == Mark::kLine) mark["point"] = true;

  if (label_rows.empty()) {
    if (!transforms.empty()) g["transform"] = std::move(transforms);
    g["mark"] = std::move(mark);
    g["encoding"] = std::move(encoding);
  } else {
    nlohmann::ordered_json base;
    if (!transforms.empty()) base["transform"] = transforms;
    base["mark"] = std::move(mark);
    base["encoding"] = encoding;
    nlohmann::ordered_json text_enc;
    if (encoding.contains("x")) text_enc["x"] = encoding["x"];
    if (encoding.contains("y")) text_enc["y"] = encoding["y"];
    text_enc["text"] = {{"field", kLabelField}, {"type", "nominal"}};
    nlohmann::ordered_json annotations;
    annotations["data"] = {{"values", detail::data_values(out.data, label_rows, label_names)}};
    annotations["mark"] = {{"type", "text"}, {"dy", -10}};
    annotations["encoding"] = std::move(text_enc);
    g["layer"] = {std::move(base), std::move(annotations)};
  }
  out.grammar_json = g.dump();
  return out;
}

}  // namespace incanvas::chart
