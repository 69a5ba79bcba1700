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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "incanvas/chart/spec.hpp"
#include "incanvas/chart/validate.hpp"
#include "incanvas/common/error.hpp"

namespace incanvas::chart {

/// Channels a mark cannot do without.
inline std::vector<Channel> required_channels(const ChartSpec& spec) {
  switch (spec.mark) {
    case Mark::kScatter:
    case Mark::kLine:
    case Mark::kBar: return {Channel::kX, Channel::kY};
    case Mark::kHistogram: return {Channel::kX};
    case Mark::kHeatmap:
      if (spec.is_matrix()) return {};
      return {Channel::kX, Channel::kY};
  }
  return {};
}

namespace detail {

struct IssuePath {
  enum class Kind { kEncoding, kColumns, kTransform, kOther } kind = Kind::kOther;
  Channel channel = Channel::kX;
  std::string field;  // "aggregate", "scale", "column" or ""
  std::size_t index = 0;
};

inline IssuePath parse_issue_path(std::string_view path) {
  IssuePath p;
  auto bracket_index = [](std::string_view s, std::size_t& out) {
    auto open = s.find('['), close = s.find(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close <= open + 1) return false;
    out = std::stoul(std::string(s.substr(open + 1, close - open - 1)));
    return true;
  };
  if (path.rfind("encodings.", 0) == 0) {
    std::string_view rest = path.substr(10);
    auto dot = rest.find('.');
    auto channel = channel_from_string(rest.substr(0, dot));
    if (!channel) return p;
    p.kind = IssuePath::Kind::kEncoding;
    p.channel = *channel;
    if (dot != std::string_view::npos) p.field = std::string(rest.substr(dot + 1));
  } else if (path.rfind("columns[", 0) == 0) {
    if (bracket_index(path, p.index)) p.kind = IssuePath::Kind::kColumns;
  } else if (path.rfind("transforms[", 0) == 0) {
    if (bracket_index(path, p.index)) p.kind = IssuePath::Kind::kTransform;
    auto dot = path.find("].");
    if (dot != std::string_view::npos) p.field = std::string(path.substr(dot + 2));
  }
  return p;
}

[[noreturn]] inline void unrepairable(const ValidationIssue& issue) {
  throw Error(errc::kUnrepairable, "cannot repair " + issue.path + ": " + issue.message,
              {{"path", issue.path}, {"issue", to_string(issue.code)}});
}

}  // namespace detail

/// One deterministic repair pass. Applies every suggested fix, drops
/// unrepairable optional channels and broken transforms, and fills in a
/// missing bar aggregate. Parts of the spec without an issue are left as
/// they are. Throws Unrepairable when a required channel cannot be resolved.
inline ChartSpec repair_spec(const ChartSpec& spec, const ValidationReport& report, const data::Dataset& dataset) {
  using detail::IssuePath;
  (void)dataset;  // fixes were already resolved against it by validate_spec
  ChartSpec out = spec;
  const auto required = required_channels(spec);
  auto is_required = [&](Channel c) { return std::find(required.begin(), required.end(), c) != required.end(); };

  std::set<Channel> drop_channels;
  std::set<std::size_t> drop_columns, drop_transforms;

  for (const auto& issue : report.issues) {
    const IssuePath path = detail::parse_issue_path(issue.path);
    switch (path.kind) {
      case IssuePath::Kind::kEncoding: {
        auto it = out.encodings.find(path.channel);
        if (issue.code == IssueCode::kMissingChannel || it == out.encodings.end()) detail::unrepairable(issue);
        Encoding& enc = it->second;
        if (path.field == "aggregate") {
          if (issue.suggested_fix) {
            enc.aggregate = data::aggregate_from_string(*issue.suggested_fix);
          } else {
            enc.aggregate.reset();
          }
        } else if (path.field == "scale") {
          enc.scale.reset();
        } else if (issue.code == IssueCode::kUnknownColumn && issue.suggested_fix) {
          enc.column = *issue.suggested_fix;
        } else if (!is_required(path.channel)) {
          drop_channels.insert(path.channel);
        } else {
          detail::unrepairable(issue);
        }
        break;
      }
      case IssuePath::Kind::kColumns:
        if (issue.code == IssueCode::kUnknownColumn && issue.suggested_fix) {
          out.columns[path.index] = *issue.suggested_fix;
        } else {
          drop_columns.insert(path.index);
        }
        break;
      case IssuePath::Kind::kTransform:
        if (issue.code == IssueCode::kUnknownColumn && issue.suggested_fix) {
          std::visit(
              [&](auto& t) {
                if constexpr (requires { t.column; }) t.column = *issue.suggested_fix;
              },
              out.transforms[path.index]);
        } else {
          drop_transforms.insert(path.index);
        }
        break;
      case IssuePath::Kind::kOther: detail::unrepairable(issue);
    }
  }

  for (auto c : drop_channels) out.encodings.erase(c);
  for (auto it = drop_columns.rbegin(); it != drop_columns.rend(); ++it) {
    out.columns.erase(out.columns.begin() + static_cast<std::ptrdiff_t>(*it));
  }
  if (spec.is_matrix() && out.columns.size() < 2) {
    throw Error(errc::kUnrepairable, "fewer than two usable correlation columns", {{"path", "columns"}});
  }
  for (auto it = drop_transforms.rbegin(); it != drop_transforms.rend(); ++it) {
    out.transforms.erase(out.transforms.begin() + static_cast<std::ptrdiff_t>(*it));
  }
  return out;
}

}  // namespace incanvas::chart
