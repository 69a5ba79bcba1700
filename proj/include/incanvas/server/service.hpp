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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "incanvas/canvas/document.hpp"
#include "incanvas/chart/compile.hpp"
#include "incanvas/chart/spec.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/common/ids.hpp"
#include "incanvas/common/text.hpp"
#include "incanvas/data/ingest.hpp"
#include "incanvas/data/profile.hpp"
#include "incanvas/gen/generator.hpp"
#include "incanvas/gen/http_provider.hpp"
#include "incanvas/gen/provider.hpp"
#include "incanvas/gen/suggest.hpp"
#include "incanvas/server/config.hpp"
#include "incanvas/server/jobs.hpp"
#include "incanvas/server/store.hpp"

namespace incanvas::server {

using Json = nlohmann::ordered_json;

/// HTTP status for an error code. Unlisted codes are payload problems (422).
inline int http_status(std::string_view code) {
  static const std::map<std::string_view, int> table = {
      {errc::kEmptyInput, 400},      {errc::kRaggedRows, 400},      {errc::kDuplicateHeader, 400},
      {errc::kInvalidEncoding, 400}, {errc::kMalformedCsv, 400},    {errc::kMalformedJson, 400},
      {errc::kUnknownDataset, 404},  {errc::kUnknownDocument, 404}, {errc::kUnknownNode, 404},
      {errc::kUnknownJob, 404},      {errc::kNotFound, 404},        {errc::kUnknownSourceNode, 404},
      {errc::kStaleVersion, 409},    {errc::kPayloadTooLarge, 413}, {errc::kQueueFull, 429},
      {errc::kStorageError, 500},    {errc::kInternalError, 500},
  };
  auto it = table.find(code);
  return it == table.end() ? 422 : it->second;
}

/// Builds the provider registry a config asks for. "rules" is always present.
inline std::shared_ptr<gen::ProviderRegistry> make_registry(const ServerConfig& config) {
  auto registry = std::make_shared<gen::ProviderRegistry>();
  registry->add(std::make_shared<gen::RulesProvider>());
  if (!config.mock_fixture.empty()) registry->add(gen::MockProvider::from_file(config.mock_fixture));
  if (config.http) registry->add(std::make_shared<gen::HttpProvider>(*config.http));
  return registry;
}

namespace detail {

inline Error invalid(const std::string& message, nlohmann::json detail = nlohmann::json::object()) {
  return Error(errc::kInvalidRequest, message, std::move(detail));
}

inline const nlohmann::json* field(const nlohmann::json& body, const char* name) {
  if (!body.is_object()) return nullptr;
  auto it = body.find(name);
  if (it == body.end() || it->is_null()) return nullptr;
  return &*it;
}

inline std::string require_string(const nlohmann::json& body, const char* name) {
  const auto* f = field(body, name);
  if (!f || !f->is_string()) throw invalid(std::string("field '") + name + "' must be a string", {{"field", name}});
  return f->get<std::string>();
}

inline std::optional<std::string> optional_string(const nlohmann::json& body, const char* name) {
  const auto* f = field(body, name);
  if (!f) return std::nullopt;
  if (!f->is_string()) throw invalid(std::string("field '") + name + "' must be a string", {{"field", name}});
  return f->get<std::string>();
}

inline std::int64_t require_version(const nlohmann::json& body) {
  const auto* f = field(body, "doc_version");
  if (!f || !f->is_number_integer()) throw invalid("field 'doc_version' must be an integer", {{"field", "doc_version"}});
  return f->get<std::int64_t>();
}

inline double require_number(const nlohmann::json& obj, const char* name, const char* where) {
  const auto* f = field(obj, name);
  if (!f || !f->is_number()) {
    throw invalid(std::string("field '") + where + "." + name + "' must be a number", {{"field", std::string(where) + "." + name}});
  }
  return f->get<double>();
}

inline std::optional<canvas::Point> optional_point(const nlohmann::json& body) {
  const auto* f = field(body, "position");
  if (!f) return std::nullopt;
  return canvas::Point{require_number(*f, "x", "position"), require_number(*f, "y", "position")};
}

inline std::optional<canvas::Size> optional_size(const nlohmann::json& body) {
  const auto* f = field(body, "size");
  if (!f) return std::nullopt;
  return canvas::Size{require_number(*f, "w", "size"), require_number(*f, "h", "size")};
}

}  // namespace detail

/// Application state behind the HTTP routes: datasets, canvas documents,
/// generation jobs and the render cache. Every method is thread-safe.
/// Document mutations run under that document's lock against a copy, which
/// replaces the live document only after it has been persisted.
class Service {
 public:
  explicit Service(ServerConfig config)
      : config_((config.validate(), std::move(config))),
        store_(config_.data_dir),
        registry_(make_registry(config_)),
        generator_(registry_),
        jobs_(std::make_unique<JobManager>(store_, config_.max_jobs, config_.max_queue)) {
    for (auto& ds : store_.load_datasets()) {
      auto id = ds.id;
      datasets_.emplace(std::move(id), std::make_shared<const data::Dataset>(std::move(ds)));
    }
    for (auto& doc : store_.load_documents()) {
      auto entry = std::make_shared<DocEntry>();
      entry->doc = std::move(doc);
      documents_.emplace(entry->doc.id(), std::move(entry));
    }
    if (!registry_->contains(config_.provider)) {
      throw Error(errc::kUnknownProvider, "default provider '" + config_.provider + "' is not configured",
                  {{"provider", config_.provider}});
    }
    jobs_->restore();
  }

  ~Service() { shutdown(); }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Lets running jobs finish; queued ones are failed by the next restore.
  void shutdown() { jobs_->stop(); }

  const ServerConfig& config() const { return config_; }
  const gen::ProviderRegistry& providers() const { return *registry_; }
  JobManager& jobs() { return *jobs_; }

  Json health() const {
    Json j;
    j["status"] = "ok";
    j["providers"] = registry_->names();
    j["default_provider"] = config_.provider;
    j["max_jobs"] = config_.max_jobs;
    return j;
  }

  // -------------------------------------------------------------------------
  // datasets

  Json upload_dataset(std::string_view csv, std::string name) {
    if (csv.size() > config_.max_upload_bytes) {
      throw Error(errc::kPayloadTooLarge, "upload exceeds the size limit", {{"limit", config_.max_upload_bytes}});
    }
    if (text::trim(name).empty()) name = "dataset";
    auto ds = std::make_shared<const data::Dataset>(data::ingest_csv(csv, std::move(name)));
    store_.save_dataset(*ds);
    {
      std::unique_lock lock(datasets_mu_);
      datasets_.emplace(ds->id, ds);
    }
    return dataset_json(*ds);
  }

  std::shared_ptr<const data::Dataset> dataset(const std::string& id) const {
    std::shared_lock lock(datasets_mu_);
    auto it = datasets_.find(id);
    if (it == datasets_.end()) throw Error(errc::kUnknownDataset, "unknown dataset '" + id + "'", {{"dataset_id", id}});
    return it->second;
  }

  Json get_dataset(const std::string& id) const { return dataset_json(*dataset(id)); }

  Json list_datasets() const {
    std::shared_lock lock(datasets_mu_);
    Json out = Json::array();
    for (const auto& [id, ds] : datasets_) {
      out.push_back({{"dataset_id", id}, {"name", ds->name}, {"row_count", ds->row_count}, {"column_count", ds->columns.size()}});
    }
    return out;
  }

  Json suggestions(const std::string& id, int k) const {
    if (k < 1) throw detail::invalid("k must be at least 1", {{"k", k}});
    Json j;
    j["dataset_id"] = id;
    j["suggestions"] = gen::suggest_prompts(*dataset(id), k);
    return j;
  }

  // -------------------------------------------------------------------------
  // documents

  Json create_document(const nlohmann::json& body) {
    const auto dataset_id = detail::require_string(body, "dataset_id");
    dataset(dataset_id);
    auto entry = std::make_shared<DocEntry>();
    entry->doc = canvas::CanvasDocument(IdGenerator::next("doc"), dataset_id);
    store_.save_document(entry->doc);
    Json j = entry->doc.to_json();
    std::unique_lock lock(documents_mu_);
    documents_.emplace(entry->doc.id(), std::move(entry));
    return j;
  }

  Json get_document(const std::string& id) const {
    auto entry = document(id);
    std::lock_guard lock(entry->mu);
    return entry->doc.to_json();
  }

  Json list_documents() const {
    std::shared_lock lock(documents_mu_);
    Json out = Json::array();
    for (const auto& [id, entry] : documents_) {
      std::lock_guard doc_lock(entry->mu);
      out.push_back({{"document_id", id}, {"dataset_id", entry->doc.dataset_id()}, {"doc_version", entry->doc.doc_version()}});
    }
    return out;
  }

  /// {kind: "note", text, position?} or {kind: "visualization", spec,
  /// position?, source_node?, edge_kind?}; both carry doc_version.
  Json add_node(const std::string& doc_id, const nlohmann::json& body) {
    const auto expected = detail::require_version(body);
    const auto kind_text = detail::require_string(body, "kind");
    auto kind = canvas::node_kind_from_string(kind_text);
    if (!kind) throw detail::invalid("unknown node kind '" + kind_text + "'", {{"kind", kind_text}});
    const auto position = detail::optional_point(body);
    std::optional<chart::ChartSpec> spec;
    std::optional<std::string> source;
    auto edge_kind = canvas::EdgeKind::kGeneratedFromNote;
    std::string note_text;
    if (*kind == canvas::NodeKind::kNote) {
      note_text = detail::require_string(body, "text");
    } else {
      const auto* sj = detail::field(body, "spec");
      if (!sj) throw detail::invalid("field 'spec' is required for visualizations", {{"field", "spec"}});
      spec = chart::spec_from_json(*sj);
      source = detail::optional_string(body, "source_node");
      if (auto ek = detail::optional_string(body, "edge_kind")) {
        auto parsed = canvas::edge_kind_from_string(*ek);
        if (!parsed) throw detail::invalid("unknown edge kind '" + *ek + "'", {{"edge_kind", *ek}});
        edge_kind = *parsed;
      }
    }
    auto entry = document(doc_id);
    std::shared_ptr<const data::Dataset> ds;
    if (spec) ds = dataset(entry->doc.dataset_id());
    return mutate(*entry, expected, [&](canvas::CanvasDocument& doc) {
      const std::string id = *kind == canvas::NodeKind::kNote
                                 ? doc.create_note(position.value_or(canvas::Point{}), note_text)
                                 : doc.create_visualization(position, *spec, *ds, source, edge_kind);
      Json out;
      out["node"] = canvas::node_to_json(doc.node(id));
      if (source) out["edge"] = canvas::edge_to_json(doc.edges().back());
      return out;
    });
  }

  /// Move and/or resize in one versioned mutation.
  Json update_node(const std::string& doc_id, const std::string& node_id, const nlohmann::json& body) {
    const auto expected = detail::require_version(body);
    const auto position = detail::optional_point(body);
    const auto size = detail::optional_size(body);
    if (!position && !size) throw detail::invalid("nothing to update: give position and/or size");
    auto entry = document(doc_id);
    return mutate(*entry, expected, [&](canvas::CanvasDocument& doc) {
      // resize first: it is the only step that can reject the payload
      if (size) doc.resize_node(node_id, *size);
      if (position) doc.move_node(node_id, *position);
      Json out;
      out["node"] = canvas::node_to_json(doc.node(node_id));
      return out;
    });
  }

  Json delete_node(const std::string& doc_id, const std::string& node_id, std::int64_t expected) {
    auto entry = document(doc_id);
    return mutate(*entry, expected, [&](canvas::CanvasDocument& doc) {
      doc.delete_node(node_id);
      Json out;
      out["node"] = canvas::node_to_json(doc.node(node_id));
      return out;
    });
  }

  Json duplicate_node(const std::string& doc_id, const std::string& node_id, const nlohmann::json& body) {
    const auto expected = detail::require_version(body);
    auto entry = document(doc_id);
    return mutate(*entry, expected, [&](canvas::CanvasDocument& doc) {
      const auto id = doc.duplicate_node(node_id);
      Json out;
      out["node"] = canvas::node_to_json(doc.node(id));
      out["edge"] = canvas::edge_to_json(doc.edges().back());
      return out;
    });
  }

  Json lineage(const std::string& doc_id, const std::string& node_id) const {
    auto entry = document(doc_id);
    std::lock_guard lock(entry->mu);
    Json j;
    j["node_id"] = node_id;
    j["ancestors"] = entry->doc.lineage(node_id);
    return j;
  }

  /// The stored spec, tombstoned nodes included.
  Json node_spec(const std::string& doc_id, const std::string& node_id) const {
    auto entry = document(doc_id);
    std::lock_guard lock(entry->mu);
    return chart::to_json(*visualization(entry->doc, node_id).spec);
  }

  /// Render payload for a visualization node, compiled on first request.
  std::shared_ptr<const std::string> render(const std::string& doc_id, const std::string& node_id) {
    auto entry = document(doc_id);
    chart::ChartSpec spec;
    std::string key;
    {
      std::lock_guard lock(entry->mu);
      const auto& n = visualization(entry->doc, node_id);
      spec = *n.spec;
      key = n.render_ref;
    }
    {
      std::lock_guard lock(render_mu_);
      if (auto it = render_cache_.find(key); it != render_cache_.end()) return it->second;
    }
    auto ds = dataset(entry->doc.dataset_id());
    return cache_payload(key, chart::compile_spec(spec, *ds));
  }

  // -------------------------------------------------------------------------
  // generation jobs

  /// {dataset_id, document_id, goal_text, source_node?, parent_node?,
  /// provider?, max_repair_attempts?, allow_fallback?}. Returns the job id
  /// at once; the chart is appended to the document when the job is done.
  Json generate(const nlohmann::json& body) {
    const auto dataset_id = detail::require_string(body, "dataset_id");
    const auto doc_id = detail::require_string(body, "document_id");
    const auto goal = detail::require_string(body, "goal_text");
    auto source = detail::optional_string(body, "source_node");
    const auto parent = detail::optional_string(body, "parent_node");
    auto ds = dataset(dataset_id);
    auto entry = document(doc_id);
    if (entry->doc.dataset_id() != dataset_id) {
      throw detail::invalid("document belongs to another dataset",
                            {{"document_dataset_id", entry->doc.dataset_id()}, {"dataset_id", dataset_id}});
    }
    gen::GenerationRequest req = base_request(body, dataset_id, goal);
    if (text::trim(goal).empty()) throw detail::invalid("goal text is empty", {{"field", "goal_text"}});

    auto edge_kind = canvas::EdgeKind::kGeneratedFromNote;
    {
      std::lock_guard lock(entry->mu);
      if (parent) {
        req.parent_spec = *visualization_for_revision(entry->doc, *parent).spec;
        source = *parent;
        edge_kind = canvas::EdgeKind::kDerivedFrom;
      } else if (source) {
        const auto* n = find_live(entry->doc, *source);
        if (!n) throw Error(errc::kUnknownSourceNode, "source node '" + *source + "' is not a live node", {{"node_id", *source}});
        if (n->kind == canvas::NodeKind::kVisualization) edge_kind = canvas::EdgeKind::kDerivedFrom;
      }
    }
    return submit(parent ? "revise" : "generate", body, entry, ds, std::move(req), source, edge_kind);
  }

  /// {instruction, provider?}: revision of a live visualization. The child is
  /// placed to the right of the parent with a derived-from edge.
  Json revise(const std::string& doc_id, const std::string& node_id, const nlohmann::json& body) {
    const auto instruction = detail::require_string(body, "instruction");
    auto entry = document(doc_id);
    auto ds = dataset(entry->doc.dataset_id());
    gen::GenerationRequest req = base_request(body, entry->doc.dataset_id(), instruction);
    {
      std::lock_guard lock(entry->mu);
      req.parent_spec = *visualization_for_revision(entry->doc, node_id).spec;
    }
    if (text::trim(instruction).empty()) throw detail::invalid("revision instruction is empty", {{"field", "instruction"}});
    Json record = body;
    record["document_id"] = doc_id;
    record["node_id"] = node_id;
    return submit("revise", record, entry, ds, std::move(req), node_id, canvas::EdgeKind::kDerivedFrom);
  }

  Json job(const std::string& id) const {
    auto snap = jobs_->snapshot(id);
    if (!snap) throw Error(errc::kUnknownJob, "unknown job '" + id + "'", {{"job_id", id}});
    return snap->to_json();
  }

  Json list_jobs() const {
    Json out = Json::array();
    for (const auto& j : jobs_->list()) {
      out.push_back({{"job_id", j.id}, {"kind", j.kind}, {"state", std::string(to_string(j.state()))}});
    }
    return out;
  }

 private:
  struct DocEntry {
    std::mutex mu;
    canvas::CanvasDocument doc;
  };

  static Json dataset_json(const data::Dataset& ds) {
    Json j;
    j["dataset_id"] = ds.id;
    j["name"] = ds.name;
    j["summary"] = data::summarize_dataset(ds).to_json();
    return j;
  }

  std::shared_ptr<DocEntry> document(const std::string& id) const {
    std::shared_lock lock(documents_mu_);
    auto it = documents_.find(id);
    if (it == documents_.end()) throw Error(errc::kUnknownDocument, "unknown document '" + id + "'", {{"document_id", id}});
    return it->second;
  }

  static const canvas::CanvasNode* find_live(const canvas::CanvasDocument& doc, const std::string& id) {
    auto it = doc.nodes().find(id);
    if (it == doc.nodes().end() || it->second.tombstone) return nullptr;
    return &it->second;
  }

  /// Spec readout target: any visualization, tombstoned or not. Notes have no spec.
  static const canvas::CanvasNode& visualization(const canvas::CanvasDocument& doc, const std::string& id) {
    const auto& n = doc.node(id);
    if (n.kind != canvas::NodeKind::kVisualization) {
      throw Error(errc::kNotFound, "node '" + id + "' is a note and has no spec", {{"node_id", id}});
    }
    return n;
  }

  static const canvas::CanvasNode& visualization_for_revision(const canvas::CanvasDocument& doc, const std::string& id) {
    const auto& n = doc.live_node(id);
    if (n.kind != canvas::NodeKind::kVisualization) {
      throw Error(errc::kNotAVisualization, "only visualizations can be revised", {{"node_id", id}});
    }
    return n;
  }

  gen::GenerationRequest base_request(const nlohmann::json& body, const std::string& dataset_id, const std::string& goal) const {
    gen::GenerationRequest req;
    req.dataset_id = dataset_id;
    req.goal_text = goal;
    req.provider = detail::optional_string(body, "provider").value_or(config_.provider);
    if (!registry_->contains(req.provider)) {
      throw Error(errc::kUnknownProvider, "unknown provider '" + req.provider + "'", {{"provider", req.provider}});
    }
    if (const auto* f = detail::field(body, "max_repair_attempts")) {
      if (!f->is_number_integer() || f->get<int>() < 0) throw detail::invalid("max_repair_attempts must be a non-negative integer");
      req.max_repair_attempts = f->get<int>();
    }
    req.allow_fallback = config_.fallback_to_rules;
    if (const auto* f = detail::field(body, "allow_fallback")) {
      if (!f->is_boolean()) throw detail::invalid("allow_fallback must be a boolean");
      req.allow_fallback = req.allow_fallback && f->get<bool>();
    }
    return req;
  }

  /// Optimistic concurrency: the client's doc_version must match. The
  /// mutation runs on a copy that replaces the document once persisted.
  template <typename Fn>
  Json mutate(DocEntry& entry, std::int64_t expected, Fn&& fn) {
    std::lock_guard lock(entry.mu);
    if (entry.doc.doc_version() != expected) {
      throw Error(errc::kStaleVersion, "document changed since version " + std::to_string(expected),
                  {{"expected", entry.doc.doc_version()}, {"got", expected}});
    }
    canvas::CanvasDocument next = entry.doc;
    Json out = fn(next);
    store_.save_document(next);
    entry.doc = std::move(next);
    out["doc_version"] = entry.doc.doc_version();
    return out;
  }

  std::shared_ptr<const std::string> cache_payload(const std::string& key, const chart::RenderPayload& payload) {
    auto text = std::make_shared<const std::string>(payload.to_json().dump());
    std::lock_guard lock(render_mu_);
    return render_cache_.try_emplace(key, std::move(text)).first->second;
  }

  Json submit(const std::string& kind, const nlohmann::json& record, std::shared_ptr<DocEntry> entry,
              std::shared_ptr<const data::Dataset> ds, gen::GenerationRequest req, std::optional<std::string> source,
              canvas::EdgeKind edge_kind) {
    auto task = [this, entry, ds, req = std::move(req), source, edge_kind](const JobManager::Advance& advance) {
      auto on_stage = [&](gen::Stage s) { advance(job_state(s)); };
      gen::GenerationResult result =
          req.parent_spec ? generator_.revise(*req.parent_spec, req.goal_text, req, ds, on_stage)
                          : generator_.generate(req, ds, on_stage);
      Json out = result.to_json();
      {
        std::lock_guard lock(entry->mu);
        canvas::CanvasDocument next = entry->doc;
        const auto id = next.create_visualization(std::nullopt, result.spec, *ds, source, edge_kind);
        store_.save_document(next);
        entry->doc = std::move(next);
        const auto& node = entry->doc.node(id);
        out["document_id"] = entry->doc.id();
        out["node_id"] = id;
        out["node"] = canvas::node_to_json(node);
        out["edge"] = source ? canvas::edge_to_json(entry->doc.edges().back()) : Json();
        out["doc_version"] = entry->doc.doc_version();
        cache_payload(node.render_ref, result.payload);
      }
      return out;
    };
    Json request = Json::parse(record.dump());
    request["provider"] = req_provider(record);
    const auto id = jobs_->submit(kind, std::move(request), std::move(task));
    Json j;
    j["job_id"] = id;
    j["state"] = "queued";
    return j;
  }

  std::string req_provider(const nlohmann::json& record) const {
    return detail::optional_string(record, "provider").value_or(config_.provider);
  }

  ServerConfig config_;
  FileStore store_;
  std::shared_ptr<gen::ProviderRegistry> registry_;
  gen::Generator generator_;

  mutable std::shared_mutex datasets_mu_;
  std::map<std::string, std::shared_ptr<const data::Dataset>> datasets_;
  mutable std::shared_mutex documents_mu_;
  std::map<std::string, std::shared_ptr<DocEntry>> documents_;
  std::mutex render_mu_;
  std::map<std::string, std::shared_ptr<const std::string>> render_cache_;

  // last member: workers reference everything above
  std::unique_ptr<JobManager> jobs_;
};

}  // namespace incanvas::server
