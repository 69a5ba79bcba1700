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

#include "incanvas/chart/spec.hpp"
#include "incanvas/common/text.hpp"
#include "incanvas/data/profile.hpp"
#include "incanvas/gen/prompt_templates.hpp"

namespace incanvas::gen {

struct PromptBundle {
  std::string system;
  std::string user;

  /// Key used by fixture-driven providers to look up canned responses.
  std::string hash() const { return text::fnv1a_hex(system + "\n" + user); }
  bool operator==(const PromptBundle&) const = default;
};

/// Deterministic for fixed inputs. The goal is embedded verbatim.
inline PromptBundle assemble_prompt(const data::DatasetSummary& summary, const std::string& goal,
                                    const std::optional<chart::ChartSpec>& parent) {
  PromptBundle b;
  b.system = templates::kSystem;
  b.user = summary.to_text();
  b.user += "\n";
  if (parent) {
    b.user += "Current spec:\n" + chart::serialize(*parent) + "\n\n";
    b.user += std::string(templates::kRevisionInstruction) + "\n";
    b.user += "Instruction: " + goal + "\n";
  } else {
    b.user += std::string(templates::kFreshInstruction) + "\n";
    b.user += "Hypothesis: " + goal + "\n";
  }
  b.user += "Output exactly one JSON object.\n";
  return b;
}

}  // namespace incanvas::gen
