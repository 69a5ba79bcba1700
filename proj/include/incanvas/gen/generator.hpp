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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/chart/compile.hpp"
#include "incanvas/chart/repair.hpp"
#include "incanvas/data/profile.hpp"
#include "incanvas/gen/parse.hpp"
#include "incanvas/gen/prompt.hpp"
#include "incanvas/gen/provider.hpp"
#include "incanvas/gen/rules.hpp"

namespace incanvas::gen {

enum class Stage { kPrompting, kAwaitingModel, kValidating, kRepairing, kCompiling };

inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kPrompting: return "prompting";
    case Stage::kAwaitingModel: return "awaiting_model";
    case Stage::kValidating: return "validating";
    case Stage::kRepairing: return "repairing";
    case Stage::kCompiling: return "compiling";
  }
  return "?";
}

using StageCallback = std::function<void(Stage)>;

inline constexpr int kDefaultMaxRepairAttempts = 3;

struct GenerationRequest {
  std::string dataset_id;
  std::string goal_text;
  std::optional<chart::ChartSpec> parent_spec;  // set for revisions
  std::string provider = "rules";
  int max_repair_attempts = kDefaultMaxRepairAttempts;
  bool allow_fallback = true;
};

enum class Provenance { kFresh, kRevisedFrom };

inline std::string_view to_string(Provenance p) { return p == Provenance::kFresh ? "fresh" : "revised-from"; }

struct GenerationResult {
  chart::ChartSpec spec;
  chart::RenderPayload payload;
  Provenance provenance = Provenance::kFresh;
  int attempts = 1;
  std::string provider_used;
  std::vector<nlohmann::ordered_json> fallback_causes;  // errors that triggered the rules fallback

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["spec"] = chart::to_json(spec);
    j["provenance"] = std::string(to_string(provenance));
    j["attempts"] = attempts;
    j["provider_used"] = provider_used;
    j["fallback_causes"] = fallback_causes;
    j["payload"] = payload.to_json();
    return j;
  }
};

/// summarize → prompt → provider → parse → validate → (repair → validate)* →
/// compile, falling back to the rule-based generator when the provider
/// path fails and the request allows it. Stateless apart from the
/// read-only registry; safe to share across threads.
class Generator {
 public:
  explicit Generator(std::shared_ptr<const ProviderRegistry> registry) : registry_(std::move(registry)) {}

  GenerationResult generate(const GenerationRequest& request, const std::shared_ptr<const data::Dataset>& dataset,
                            const StageCallback& on_stage = {}) const {
    auto stage = [&](Stage s) {
      if (on_stage) on_stage(s);
    };
    if (text::trim(request.goal_text).empty()) {
      throw Error(errc::kInvalidRequest, request.parent_spec ? "revision instruction is empty" : "goal text is empty");
    }
    if (!dataset) throw Error(errc::kUnknownDataset, "unknown dataset '" + request.dataset_id + "'");
    if (request.max_repair_attempts < 0) throw Error(errc::kInvalidRequest, "max_repair_attempts must be >= 0");
    auto provider = registry_->get(request.provider);
    const Provenance provenance = request.parent_spec ? Provenance::kRevisedFrom : Provenance::kFresh;

    std::vector<nlohmann::ordered_json> causes;
    try {
      stage(Stage::kPrompting);
      ProviderRequest preq{assemble_prompt(data::summarize_dataset(*dataset), request.goal_text, request.parent_spec),
                           request.goal_text, request.parent_spec, dataset};
      stage(Stage::kAwaitingModel);
      const std::string text = complete_with_timeout(provider, preq);
      chart::ChartSpec spec = parse_model_output(text);
      int attempts = 1;
      for (;;) {
        stage(Stage::kValidating);
        auto report = chart::validate_spec(spec, *dataset);
        if (report.valid()) break;
        if (attempts > request.max_repair_attempts) {
          throw Error(errc::kGenerationFailed, "spec still invalid after " + std::to_string(attempts - 1) + " repairs",
                      nlohmann::json::parse(report.to_json().dump()));
        }
        stage(Stage::kRepairing);
        spec = chart::repair_spec(spec, report, *dataset);
        ++attempts;
      }
      stage(Stage::kCompiling);
      auto payload = chart::compile_spec(spec, *dataset);
      return GenerationResult{std::move(spec), std::move(payload), provenance, attempts, provider->name(), {}};
    } catch (const Error& e) {
      causes.push_back(e.to_json());
      const bool can_fallback = request.allow_fallback && provider->name() != "rules";
      if (!can_fallback) {
        if (e.code() == errc::kProviderTimeout) throw;
        throw Error(errc::kGenerationFailed, "generation failed: " + std::string(e.what()), causes_json(causes));
      }
    }

    try {
      chart::ChartSpec spec = rule_based_generate(request.goal_text, *dataset, request.parent_spec);
      stage(Stage::kValidating);
      auto report = chart::validate_spec(spec, *dataset);
      if (!report.valid()) {
        throw Error(errc::kInvalidSpec, "rule-based spec does not validate", nlohmann::json::parse(report.to_json().dump()));
      }
      stage(Stage::kCompiling);
      auto payload = chart::compile_spec(spec, *dataset);
      return GenerationResult{std::move(spec), std::move(payload), provenance, 1, "rules", std::move(causes)};
    } catch (const Error& e) {
      causes.push_back(e.to_json());
      throw Error(errc::kGenerationFailed, "generation and rule-based fallback both failed", causes_json(causes));
    }
  }

  /// Revision of an existing chart. The parent must validate; it is copied,
  /// never modified.
  GenerationResult revise(const chart::ChartSpec& parent, const std::string& instruction, GenerationRequest request,
                          const std::shared_ptr<const data::Dataset>& dataset, const StageCallback& on_stage = {}) const {
    if (text::trim(instruction).empty()) throw Error(errc::kInvalidRequest, "revision instruction is empty");
    if (!dataset) throw Error(errc::kUnknownDataset, "unknown dataset '" + request.dataset_id + "'");
    auto report = chart::validate_spec(parent, *dataset);
    if (!report.valid()) {
      throw Error(errc::kInvalidSpec, "parent spec does not validate", nlohmann::json::parse(report.to_json().dump()));
    }
    request.goal_text = instruction;
    request.parent_spec = parent;
    return generate(request, dataset, on_stage);
  }

 private:
  static nlohmann::json causes_json(const std::vector<nlohmann::ordered_json>& causes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : causes) arr.push_back(nlohmann::json::parse(c.dump()));
    return {{"causes", arr}};
  }

  std::shared_ptr<const ProviderRegistry> registry_;
};

}  // namespace incanvas::gen
