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
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "incanvas/chart/spec.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/common/text.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::gen {

/// A dataset column found in free text.
struct ColumnMatch {
  std::size_t column = 0;    // index into Dataset::columns
  std::size_t position = 0;  // byte offset in the text
  std::size_t length = 0;
};

namespace detail {

inline std::string fold(std::string_view s) {
  std::string out = text::to_lower(s);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

// The folded name plus the name without a trailing "(...)" qualifier, so that
// "agricultural land" finds "Agricultural Land(%)".
inline std::vector<std::string> aliases(const std::string& name) {
  std::vector<std::string> out{fold(name)};
  auto paren = name.rfind('(');
  if (paren != std::string::npos && paren > 0 && name.back() == ')') {
    std::string bare(text::trim(std::string_view(name).substr(0, paren)));
    if (!bare.empty()) out.push_back(fold(bare));
  }
  return out;
}

inline bool boundary_ok(const std::string& hay, std::size_t pos, std::size_t len) {
  if (pos > 0 && text::is_word_char(hay[pos - 1]) && text::is_word_char(hay[pos])) return false;
  std::size_t end = pos + len;
  if (end < hay.size() && text::is_word_char(hay[end]) && text::is_word_char(hay[end - 1])) return false;
  return true;
}

inline bool has_word(const std::string& folded, std::initializer_list<const char*> words) {
  for (const char* w : words) {
    std::string needle(w);
    for (auto pos = folded.find(needle); pos != std::string::npos; pos = folded.find(needle, pos + 1)) {
      if (boundary_ok(folded, pos, needle.size())) return true;
    }
  }
  return false;
}

inline std::optional<std::size_t> word_position(const std::string& folded, std::initializer_list<const char*> words) {
  std::optional<std::size_t> best;
  for (const char* w : words) {
    std::string needle(w);
    for (auto pos = folded.find(needle); pos != std::string::npos; pos = folded.find(needle, pos + 1)) {
      if (boundary_ok(folded, pos, needle.size())) {
        if (!best || pos < *best) best = pos;
        break;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Finds column names in `text`: case-insensitive, '_' equals ' ', whole words
/// only. Longer names claim their span first ("GDP per capita" beats "GDP").
/// Each column matches at most once; results are in text order.
inline std::vector<ColumnMatch> match_columns(std::string_view text, const data::Dataset& ds) {
  const std::string hay = detail::fold(text);
  struct Candidate {
    std::size_t column;
    std::string needle;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < ds.columns.size(); ++i) {
    for (auto& a : detail::aliases(ds.columns[i].name)) candidates.push_back({i, std::move(a)});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.needle.size() > b.needle.size(); });

  std::vector<bool> claimed(hay.size(), false);
  std::set<std::size_t> matched;
  std::vector<ColumnMatch> out;
  for (const auto& c : candidates) {
    if (c.needle.empty() || matched.count(c.column)) continue;
    for (auto pos = hay.find(c.needle); pos != std::string::npos; pos = hay.find(c.needle, pos + 1)) {
      if (!detail::boundary_ok(hay, pos, c.needle.size())) continue;
      if (std::any_of(claimed.begin() + static_cast<std::ptrdiff_t>(pos),
                      claimed.begin() + static_cast<std::ptrdiff_t>(pos + c.needle.size()), [](bool b) { return b; })) {
        continue;
      }
      std::fill(claimed.begin() + static_cast<std::ptrdiff_t>(pos),
                claimed.begin() + static_cast<std::ptrdiff_t>(pos + c.needle.size()), true);
      matched.insert(c.column);
      out.push_back({c.column, pos, c.needle.size()});
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.position < b.position; });
  return out;
}

namespace detail {

inline constexpr std::initializer_list<const char*> kCausalVerbs = {
    "influence", "influences", "influenced", "affect", "affects", "impact", "impacts", "drive",
    "drives",    "determine",  "determines", "predict", "predicts", "explain", "explains", "shape", "shapes"};

inline chart::Encoding enc(const data::Dataset& ds, std::size_t col,
                           std::optional<data::Aggregate> agg = std::nullopt) {
  return chart::Encoding{ds.columns[col].name, agg, std::nullopt};
}

inline chart::ChartSpec fresh(const std::string& goal, const data::Dataset& ds) {
  using chart::Channel;
  using chart::Mark;
  using data::ColumnType;
  const std::string folded = fold(goal);
  const auto matches = match_columns(goal, ds);

  std::vector<ColumnMatch> quant, cat, temporal;
  for (const auto& m : matches) {
    switch (ds.columns[m.column].ctype) {
      case ColumnType::kQuantitative: quant.push_back(m); break;
      case ColumnType::kCategorical: cat.push_back(m); break;
      case ColumnType::kTemporal: temporal.push_back(m); break;
    }
  }

  chart::ChartSpec s;
  s.title = std::string(text::trim(goal));

  if (quant.size() >= 2) {
    // "A, B influence C": the outcome after the verb goes on y.
    std::size_t xi = 0, yi = 1;
    if (auto verb = word_position(folded, kCausalVerbs)) {
      auto before = std::find_if(quant.begin(), quant.end(), [&](const auto& m) { return m.position < *verb; });
      auto after = std::find_if(quant.begin(), quant.end(), [&](const auto& m) { return m.position > *verb; });
      if (before != quant.end() && after != quant.end()) {
        xi = static_cast<std::size_t>(before - quant.begin());
        yi = static_cast<std::size_t>(after - quant.begin());
      }
    }
    s.mark = Mark::kScatter;
    s.encodings[Channel::kX] = enc(ds, quant[xi].column);
    s.encodings[Channel::kY] = enc(ds, quant[yi].column);
    return s;
  }
  if (!temporal.empty() && !quant.empty()) {
    s.mark = Mark::kLine;
    s.encodings[Channel::kX] = enc(ds, temporal[0].column);
    s.encodings[Channel::kY] = enc(ds, quant[0].column);
    return s;
  }
  if (!cat.empty() && !quant.empty()) {
    s.mark = Mark::kBar;
    s.encodings[Channel::kX] = enc(ds, cat[0].column);
    s.encodings[Channel::kY] = enc(ds, quant[0].column, data::Aggregate::kMean);
    return s;
  }
  if (!quant.empty() && has_word(folded, {"distribution", "histogram", "spread"})) {
    s.mark = Mark::kHistogram;
    s.encodings[Channel::kX] = enc(ds, quant[0].column);
    return s;
  }
  if (has_word(folded, {"correlation", "correlations", "overview", "matrix"})) {
    s.mark = Mark::kHeatmap;
    for (const auto& c : ds.columns) {
      if (c.ctype == ColumnType::kQuantitative) s.columns.push_back(c.name);
    }
    if (s.columns.size() < 2) {
      throw Error(errc::kNoColumnsMatched, "a correlation overview needs two quantitative columns");
    }
    return s;
  }
  if (!quant.empty()) {
    s.mark = Mark::kHistogram;
    s.encodings[Channel::kX] = enc(ds, quant[0].column);
    return s;
  }
  if (!cat.empty()) {
    s.mark = Mark::kBar;
    s.encodings[Channel::kX] = enc(ds, cat[0].column);
    s.encodings[Channel::kY] = enc(ds, cat[0].column, data::Aggregate::kCount);
    return s;
  }
  throw Error(errc::kNoColumnsMatched, "no dataset column is named in the goal", {{"goal", goal}});
}

inline std::optional<data::FilterOp> op_word(const std::string& w) {
  if (w == "above" || w == "over" || w == "greater than" || w == "more than") return data::FilterOp::kGt;
  if (w == "below" || w == "under" || w == "less than") return data::FilterOp::kLt;
  if (w == "at least") return data::FilterOp::kGe;
  if (w == "at most") return data::FilterOp::kLe;
  if (w == "is" || w == "equals") return data::FilterOp::kEq;
  return data::filter_op_from_string(w);
}

inline void add_filter(chart::ChartSpec& s, const std::string& instruction, std::size_t at, const data::Dataset& ds) {
  const std::string rest = instruction.substr(at);
  auto matches = match_columns(rest, ds);
  if (matches.empty()) throw Error(errc::kNoColumnsMatched, "filter names no dataset column", {{"instruction", instruction}});
  const auto& m = matches.front();
  const data::Column& col = ds.columns[m.column];
  static const std::regex op_re(
      R"(^\s*(>=|<=|!=|=|<|>|greater than|more than|less than|at least|at most|above|below|over|under|equals|is)\s*(.+?)\s*$)",
      std::regex::icase);
  std::smatch om;
  std::string tail = rest.substr(m.position + m.length);
  if (!std::regex_match(tail, om, op_re)) {
    throw Error(errc::kUnrecognizedRevision, "filter needs '<column> <op> <value>'", {{"instruction", instruction}});
  }
  auto op = op_word(text::to_lower(om[1].str()));
  std::string raw = om[2].str();
  if (raw.size() >= 2 && (raw.front() == '"' || raw.front() == '\'') && raw.back() == raw.front()) {
    raw = raw.substr(1, raw.size() - 2);
  }
  chart::FilterTransform f{col.name, *op, std::string(raw), {}};
  if (col.ctype == data::ColumnType::kQuantitative) {
    auto n = data::parse_number(raw);
    if (!n) throw Error(errc::kUnrecognizedRevision, "filter value is not a number", {{"value", raw}});
    f.value = *n;
  }
  s.transforms.push_back(std::move(f));
}

inline chart::ChartSpec revise(const std::string& instruction, const data::Dataset& ds, const chart::ChartSpec& parent) {
  using chart::Channel;
  chart::ChartSpec s = parent;
  const std::string folded = fold(instruction);
  bool recognized = false;

  if (auto at = folded.find("filter"); at != std::string::npos && boundary_ok(folded, at, 6)) {
    add_filter(s, instruction, at + 6, ds);
    recognized = true;
  }

  if (has_word(folded, {"swap", "flip", "transpose"})) {
    auto x = s.encodings.find(Channel::kX);
    auto y = s.encodings.find(Channel::kY);
    if (x == s.encodings.end() || y == s.encodings.end()) {
      throw Error(errc::kUnrecognizedRevision, "nothing to swap: the chart lacks an x or y encoding");
    }
    std::swap(x->second, y->second);
    recognized = true;
  }

  if (has_word(folded, {"log", "logarithmic", "log-scale"})) {
    bool on_x = has_word(folded, {"x", "x-axis", "horizontal"});
    bool on_y = has_word(folded, {"y", "y-axis", "vertical"}) || !on_x;
    for (auto [flag, channel] : {std::pair{on_x, Channel::kX}, std::pair{on_y, Channel::kY}}) {
      if (!flag) continue;
      auto it = s.encodings.find(channel);
      if (it == s.encodings.end()) {
        throw Error(errc::kUnrecognizedRevision, "no " + std::string(chart::to_string(channel)) + " axis to rescale");
      }
      it->second.scale = chart::Scale::kLog;
    }
    recognized = true;
  }

  static const std::regex color_re(R"(\bcolou?r(?:ed)?\s+(?:it\s+)?by\s+(.+))", std::regex::icase);
  std::smatch cm;
  if (std::regex_search(instruction, cm, color_re)) {
    auto matches = match_columns(cm[1].str(), ds);
    if (matches.empty()) throw Error(errc::kNoColumnsMatched, "color names no dataset column", {{"instruction", instruction}});
    s.encodings[Channel::kColor] = enc(ds, matches.front().column);
    recognized = true;
  }

  static const std::regex topk_re(R"(\btop\s+and\s+bottom\s+(\d+(?:\.\d+)?)\s*(%|percent)?)", std::regex::icase);
  std::smatch tm;
  if (std::regex_search(instruction, tm, topk_re)) {
    double n = std::stod(tm[1].str());
    Channel channel = s.encodings.count(Channel::kY) ? Channel::kY : Channel::kX;
    std::erase_if(s.transforms, [](const auto& t) { return std::holds_alternative<chart::TopKLabelTransform>(t); });
    s.transforms.push_back(chart::TopKLabelTransform{channel, n / 100.0});
    recognized = true;
  }

  if (!recognized) {
    throw Error(errc::kUnrecognizedRevision, "no supported edit in the instruction", {{"instruction", instruction}});
  }
  return s;
}

}  // namespace detail

/// Deterministic stand-in for the model. Fresh goals pick a chart from the
/// columns they name; revisions apply keyword edits to a copy of the parent.
inline chart::ChartSpec rule_based_generate(const std::string& goal, const data::Dataset& dataset,
                                            const std::optional<chart::ChartSpec>& parent) {
  if (text::trim(goal).empty()) throw Error(errc::kInvalidRequest, "goal text is empty");
  return parent ? detail::revise(goal, dataset, *parent) : detail::fresh(goal, dataset);
}

}  // namespace incanvas::gen
