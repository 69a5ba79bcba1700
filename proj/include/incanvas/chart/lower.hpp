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

#include <optional>
#include <string>
#include <vector>

#include "incanvas/chart/spec.hpp"
#include "incanvas/data/query.hpp"

namespace incanvas::chart {

inline constexpr int kDefaultBinCount = 10;
inline constexpr data::Aggregate kDefaultBarAggregate = data::Aggregate::kMean;

/// The query column that feeds a channel.
inline std::optional<data::Projection> channel_projection(const ChartSpec& spec, Channel channel) {
  if (spec.is_matrix()) return std::nullopt;
  if (spec.mark == Mark::kHistogram) {
    const Encoding* x = spec.encoding(Channel::kX);
    if (!x) return std::nullopt;
    if (channel == Channel::kX) return data::Projection{x->column, std::nullopt};
    if (channel == Channel::kY) return data::Projection{x->column, data::Aggregate::kCount};
    return std::nullopt;
  }
  const Encoding* e = spec.encoding(channel);
  if (!e) {
    // color-less heatmaps shade by row count
    if (spec.mark == Mark::kHeatmap && channel == Channel::kColor && spec.encoding(Channel::kX)) {
      return data::Projection{spec.encoding(Channel::kX)->column, data::Aggregate::kCount};
    }
    return std::nullopt;
  }
  auto aggregate = e->aggregate;
  if (spec.mark == Mark::kBar && channel == Channel::kY && !aggregate) aggregate = kDefaultBarAggregate;
  return data::Projection{e->column, aggregate};
}

/// Deterministic lowering of a validated spec to a query. Encodings become
/// projections in channel order, filter transforms become filters, histograms
/// bin their x column (10 bins unless a bin transform says otherwise) and
/// count, line charts sort by x. Label transforms are not part of the query;
/// see label_pass().
inline data::ChartQuery spec_to_query(const ChartSpec& spec) {
  data::ChartQuery q;
  auto add_projection = [&](const data::Projection& p) {
    for (const auto& existing : q.projections) {
      if (existing == p) return;
    }
    q.projections.push_back(p);
  };

  if (spec.is_matrix()) {
    for (const auto& c : spec.columns) add_projection({c, std::nullopt});
  } else {
    for (auto channel : kAllChannels) {
      if (auto p = channel_projection(spec, channel)) add_projection(*p);
    }
  }

  for (const auto& t : spec.transforms) {
    if (auto f = std::get_if<FilterTransform>(&t)) {
      q.filters.push_back({f->column, f->op, f->value, f->upper});
    } else if (auto b = std::get_if<BinTransform>(&t)) {
      if (!q.bins) q.bins = data::Binning{b->column, b->bin_count};
    }
  }
  if (spec.mark == Mark::kHistogram && !spec.is_matrix()) {
    if (const Encoding* x = spec.encoding(Channel::kX); x && (!q.bins || q.bins->column != x->column)) {
      q.bins = data::Binning{x->column, kDefaultBinCount};
    }
  }
  if (spec.mark == Mark::kLine) {
    if (auto x = channel_projection(spec, Channel::kX)) q.sort = data::SortKey{x->column, x->aggregate};
  }
  return q;
}

/// Post-query labeling step requested by a topk-label transform.
struct LabelPass {
  std::string field;  // output column of the query
  double p = 0.1;
  bool operator==(const LabelPass&) const = default;
};

inline std::optional<LabelPass> label_pass(const ChartSpec& spec) {
  for (const auto& t : spec.transforms) {
    if (auto k = std::get_if<TopKLabelTransform>(&t)) {
      if (auto p = channel_projection(spec, k->channel)) return LabelPass{p->output_name(), k->p};
    }
  }
  return std::nullopt;
}

}  // namespace incanvas::chart
