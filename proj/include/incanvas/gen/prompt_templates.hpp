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

// All model-facing prompt text lives here so it can be revised in one place.

#pragma once

namespace incanvas::gen::templates {

inline constexpr const char* kSystem = R"(You turn a data-analysis hypothesis into one chart specification.
Reply with exactly one JSON object and nothing else.

Chart specification schema (spec_version 1):
{
  "spec_version": 1,
  "mark": "scatter" | "bar" | "line" | "histogram" | "heatmap",
  "title": string,
  "encodings": {
    "<channel>": {"column": string, "aggregate": "sum"|"mean"|"count"|"min"|"max" (optional), "scale": "linear"|"log" (optional)}
  },
  "columns": [string, ...]   (heatmap correlation matrix only),
  "transforms": [
    {"type": "filter", "column": string, "op": "="|"!="|"<"|"<="|">"|">="|"in-range", "value": number|string, "upper": number|string (in-range only)},
    {"type": "bin", "column": string, "bin_count": integer},
    {"type": "topk_label", "channel": "x"|"y", "p": number strictly between 0 and 0.5}
  ]
}
Channels: x, y, color, size, label.
Rules:
- scatter, line and bar need x and y; histogram needs x only.
- bar y needs an aggregate.
- A correlation overview is a heatmap with "columns" listing quantitative columns and no x/y.
- Use column names exactly as listed in the dataset summary.
- Log scale only on quantitative columns.)";

inline constexpr const char* kFreshInstruction = "Create a chart specification that explores this hypothesis.";

inline constexpr const char* kRevisionInstruction =
    "Please modify this spec according to the instruction and keep everything it does not mention.";

}  // namespace incanvas::gen::templates
