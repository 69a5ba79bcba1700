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
#include <string>
#include <vector>

#include "incanvas/common/error.hpp"
#include "incanvas/data/profile.hpp"

namespace incanvas::gen {

/// Starter prompts for an unfamiliar dataset. Quantitative slots are filled by
/// descending variance, the categorical slot by highest cardinality; ties keep
/// column order. Templates whose slots cannot be filled are skipped.
inline std::vector<std::string> suggest_prompts(const data::Dataset& dataset, int k) {
  if (k < 1) throw Error(errc::kInvalidRequest, "k must be at least 1", {{"k", k}});

  std::vector<std::pair<double, std::string>> quant;
  const data::Column* cat = nullptr;
  std::size_t cat_distinct = 0;
  for (const auto& c : dataset.columns) {
    auto p = data::profile_column(c, dataset.row_count);
    if (c.ctype == data::ColumnType::kQuantitative && p.stddev) {
      quant.emplace_back(*p.stddev * *p.stddev, c.name);
    } else if (c.ctype == data::ColumnType::kCategorical && p.distinct_count > 0 && (!cat || p.distinct_count > cat_distinct)) {
      cat = &c;
      cat_distinct = p.distinct_count;
    }
  }
  std::stable_sort(quant.begin(), quant.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  auto q = [&](std::size_t i) { return quant[i].second; };
  std::vector<std::string> out;
  auto push = [&](bool available, const std::string& s) {
    if (available) out.push_back(s);
  };
  push(quant.size() >= 2, quant.size() >= 2 ? "How does " + q(0) + " relate to " + q(1) + "?" : "");
  push(quant.size() >= 2, "Show an overview with correlation matrix");
  push(!quant.empty(), !quant.empty() ? "Show the distribution of " + q(0) : "");
  push(!quant.empty() && cat, !quant.empty() && cat ? "Compare average " + q(0) + " by " + cat->name : "");
  push(quant.size() >= 2, quant.size() >= 2 ? "Show the distribution of " + q(1) : "");
  push(quant.size() >= 3, quant.size() >= 3 ? "How does " + q(1) + " relate to " + q(2) + "?" : "");
  push(cat != nullptr, cat ? "Show the count of rows per " + cat->name : "");

  if (out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
  return out;
}

}  // namespace incanvas::gen
