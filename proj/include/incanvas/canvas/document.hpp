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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/chart/spec.hpp"
#include "incanvas/chart/validate.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/common/ids.hpp"
#include "incanvas/common/text.hpp"

namespace incanvas::canvas {

inline constexpr int kFormatVersion = 1;

enum class NodeKind { kNote, kVisualization };
enum class EdgeKind { kDerivedFrom, kDuplicatedFrom, kGeneratedFromNote };

inline std::string_view to_string(NodeKind k) { return k == NodeKind::kNote ? "note" : "visualization"; }

inline std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::kDerivedFrom: return "derived-from";
    case EdgeKind::kDuplicatedFrom: return "duplicated-from";
    case EdgeKind::kGeneratedFromNote: return "generated-from-note";
  }
  return "?";
}

inline std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  if (s == "note") return NodeKind::kNote;
  if (s == "visualization") return NodeKind::kVisualization;
  return std::nullopt;
}

inline std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
  for (auto k : {EdgeKind::kDerivedFrom, EdgeKind::kDuplicatedFrom, EdgeKind::kGeneratedFromNote}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

struct Size {
  double w = 0;
  double h = 0;
  bool operator==(const Size&) const = default;
};

// canvas units
inline constexpr Size kNoteSize{240, 80};
inline constexpr Size kVisualizationSize{480, 320};
inline constexpr double kBelowGap = 16;
inline constexpr double kRightGap = 24;
inline constexpr Point kDuplicateOffset{24, 24};

struct CanvasNode {
  std::string id;
  NodeKind kind = NodeKind::kNote;
  Point position;
  Size size;
  std::int64_t z = 0;
  std::string text;                      // note
  std::optional<chart::ChartSpec> spec;  // visualization
  std::string render_ref;                // visualization: key of the cached render payload
  bool tombstone = false;

  bool operator==(const CanvasNode&) const = default;
};

struct ProvenanceEdge {
  std::string from;  // parent
  std::string to;    // child
  EdgeKind kind = EdgeKind::kDerivedFrom;
  std::int64_t created_at = 0;  // ms since epoch
  bool operator==(const ProvenanceEdge&) const = default;
};

/// Render payloads are cached under a key derived from dataset and spec.
inline std::string render_key(const std::string& dataset_id, const chart::ChartSpec& spec) {
  return "r" + text::fnv1a_hex(dataset_id + "\n" + chart::serialize(spec));
}

/// One freeform canvas. Every mutation bumps doc_version; deletes leave
/// tombstones so provenance stays intact. Not thread-safe.
class CanvasDocument {
 public:
  CanvasDocument() = default;
  CanvasDocument(std::string id, std::string dataset_id) : id_(std::move(id)), dataset_id_(std::move(dataset_id)) {}

  const std::string& id() const { return id_; }
  const std::string& dataset_id() const { return dataset_id_; }
  std::int64_t doc_version() const { return doc_version_; }
  std::int64_t next_z() const { return next_z_; }
  const std::map<std::string, CanvasNode>& nodes() const { return nodes_; }
  const std::vector<ProvenanceEdge>& edges() const { return edges_; }

  /// Live or tombstoned node.
  const CanvasNode& node(const std::string& node_id) const {
    auto it = nodes_.find(node_id);
    if (it == nodes_.end()) throw unknown(node_id);
    return it->second;
  }

  const CanvasNode& live_node(const std::string& node_id) const {
    const auto& n = node(node_id);
    if (n.tombstone) throw unknown(node_id);
    return n;
  }

  std::string create_note(Point position, const std::string& note_text) {
    if (text::trim(note_text).empty()) throw Error(errc::kInvalidText, "note text is empty");
    CanvasNode n;
    n.id = allocate_id();
    n.kind = NodeKind::kNote;
    n.position = position;
    n.size = kNoteSize;
    n.z = next_z_++;
    n.text = note_text;
    return insert(std::move(n));
  }

  /// Without an explicit position, a chart made from a note goes below the
  /// note and a revision goes to the right of its parent.
  std::string create_visualization(std::optional<Point> position, const chart::ChartSpec& spec,
                                   const data::Dataset& dataset, const std::optional<std::string>& source = std::nullopt,
                                   EdgeKind edge_kind = EdgeKind::kGeneratedFromNote) {
    const CanvasNode* parent = nullptr;
    if (source) {
      auto it = nodes_.find(*source);
      if (it == nodes_.end() || it->second.tombstone) {
        throw Error(errc::kUnknownSourceNode, "source node '" + *source + "' is not a live node", {{"node_id", *source}});
      }
      parent = &it->second;
    }
    auto report = chart::validate_spec(spec, dataset);
    if (!report.valid()) {
      throw Error(errc::kInvalidSpec, "spec does not validate", nlohmann::json::parse(report.to_json().dump()));
    }
    CanvasNode n;
    n.id = allocate_id();
    n.kind = NodeKind::kVisualization;
    n.size = kVisualizationSize;
    if (position) {
      n.position = *position;
    } else if (parent && edge_kind == EdgeKind::kGeneratedFromNote) {
      n.position = {parent->position.x, parent->position.y + parent->size.h + kBelowGap};
    } else if (parent) {
      n.position = {parent->position.x + parent->size.w + kRightGap, parent->position.y};
    }
    n.z = next_z_++;
    n.spec = spec;
    n.render_ref = render_key(dataset_id_, spec);
    if (parent) edges_.push_back({parent->id, n.id, edge_kind, now_millis()});
    return insert(std::move(n));
  }

  /// Moving raises the node to the top.
  std::int64_t move_node(const std::string& node_id, Point position) {
    auto& n = mutable_live(node_id);
    n.position = position;
    n.z = next_z_++;
    return ++doc_version_;
  }

  std::int64_t resize_node(const std::string& node_id, Size size) {
    auto& n = mutable_live(node_id);
    if (!(size.w > 0) || !(size.h > 0) || !std::isfinite(size.w) || !std::isfinite(size.h)) {
      throw Error(errc::kNonPositiveSize, "width and height must be positive", {{"w", size.w}, {"h", size.h}});
    }
    n.size = size;
    return ++doc_version_;
  }

  std::string duplicate_node(const std::string& node_id) {
    const auto& original = mutable_live(node_id);
    if (original.kind != NodeKind::kVisualization) {
      throw Error(errc::kNotAVisualization, "only visualizations can be duplicated", {{"node_id", node_id}});
    }
    CanvasNode copy = original;
    copy.id = allocate_id();
    copy.position = {original.position.x + kDuplicateOffset.x, original.position.y + kDuplicateOffset.y};
    copy.z = next_z_++;
    edges_.push_back({original.id, copy.id, EdgeKind::kDuplicatedFrom, now_millis()});
    return insert(std::move(copy));
  }

  std::int64_t delete_node(const std::string& node_id) {
    mutable_live(node_id).tombstone = true;
    return ++doc_version_;
  }

  /// Ancestors via derived-from and duplicated-from edges, nearest first.
  std::vector<std::string> lineage(const std::string& node_id) const {
    node(node_id);
    std::vector<std::string> out;
    std::set<std::string> seen{node_id};
    std::string current = node_id;
    while (auto parent = lineage_parent(current)) {
      if (!seen.insert(*parent).second) break;
      out.push_back(*parent);
      current = *parent;
    }
    return out;
  }

  std::optional<std::string> lineage_parent(const std::string& node_id) const {
    for (const auto& e : edges_) {
      if (e.to == node_id && e.kind != EdgeKind::kGeneratedFromNote) return e.from;
    }
    return std::nullopt;
  }

  nlohmann::ordered_json to_json() const;
  static CanvasDocument from_json(const nlohmann::json& j);

  bool operator==(const CanvasDocument&) const = default;

 private:
  Error unknown(const std::string& node_id) const {
    return Error(errc::kUnknownNode, "no live node '" + node_id + "'", {{"node_id", node_id}});
  }

  CanvasNode& mutable_live(const std::string& node_id) {
    auto it = nodes_.find(node_id);
    if (it == nodes_.end() || it->second.tombstone) throw unknown(node_id);
    return it->second;
  }

  std::string allocate_id() {
    char buf[16];
    std::snprintf(buf, sizeof buf, "n%06lld", static_cast<long long>(next_node_seq_++));
    return buf;
  }

  std::string insert(CanvasNode n) {
    std::string id = n.id;
    nodes_.emplace(id, std::move(n));
    ++doc_version_;
    return id;
  }

  std::string id_;
  std::string dataset_id_;
  std::map<std::string, CanvasNode> nodes_;
  std::vector<ProvenanceEdge> edges_;
  std::int64_t next_z_ = 1;
  std::int64_t doc_version_ = 0;
  std::int64_t next_node_seq_ = 1;
};

// ---------------------------------------------------------------------------
// versioned JSON

inline nlohmann::ordered_json node_to_json(const CanvasNode& n) {
  nlohmann::ordered_json nj;
  nj["id"] = n.id;
  nj["kind"] = std::string(to_string(n.kind));
  nj["position"] = {{"x", n.position.x}, {"y", n.position.y}};
  nj["size"] = {{"w", n.size.w}, {"h", n.size.h}};
  nj["z"] = n.z;
  nj["tombstone"] = n.tombstone;
  if (n.kind == NodeKind::kNote) {
    nj["text"] = n.text;
  } else {
    nj["spec"] = chart::to_json(*n.spec);
    nj["render_ref"] = n.render_ref;
  }
  return nj;
}

inline nlohmann::ordered_json edge_to_json(const ProvenanceEdge& e) {
  return {{"from", e.from}, {"to", e.to}, {"kind", std::string(to_string(e.kind))}, {"created_at", e.created_at}};
}

inline nlohmann::ordered_json CanvasDocument::to_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["id"] = id_;
  j["dataset_id"] = dataset_id_;
  j["doc_version"] = doc_version_;
  j["next_z"] = next_z_;
  j["next_node_seq"] = next_node_seq_;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& [id, n] : nodes_) nodes.push_back(node_to_json(n));
  j["nodes"] = std::move(nodes);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : edges_) edges.push_back(edge_to_json(e));
  j["edges"] = std::move(edges);
  return j;
}

inline CanvasDocument CanvasDocument::from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& why) { return Error(errc::kMalformedDocument, "malformed canvas document: " + why); };
  if (!j.is_object()) throw bad("expected an object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) throw bad("missing format_version");
  if (j["format_version"].get<long long>() != kFormatVersion) {
    throw Error(errc::kUnsupportedVersion, "unsupported canvas format_version " + j["format_version"].dump(),
                {{"format_version", j["format_version"]}});
  }
  CanvasDocument doc;
  try {
    doc.id_ = j.at("id").get<std::string>();
    doc.dataset_id_ = j.at("dataset_id").get<std::string>();
    doc.doc_version_ = j.at("doc_version").get<std::int64_t>();
    doc.next_z_ = j.at("next_z").get<std::int64_t>();
    doc.next_node_seq_ = j.at("next_node_seq").get<std::int64_t>();
    for (const auto& nj : j.at("nodes")) {
      CanvasNode n;
      n.id = nj.at("id").get<std::string>();
      auto kind = node_kind_from_string(nj.at("kind").get<std::string>());
      if (!kind) throw bad("unknown node kind");
      n.kind = *kind;
      n.position = {nj.at("position").at("x").get<double>(), nj.at("position").at("y").get<double>()};
      n.size = {nj.at("size").at("w").get<double>(), nj.at("size").at("h").get<double>()};
      n.z = nj.at("z").get<std::int64_t>();
      n.tombstone = nj.at("tombstone").get<bool>();
      if (n.kind == NodeKind::kNote) {
        n.text = nj.at("text").get<std::string>();
      } else {
        n.spec = chart::spec_from_json(nj.at("spec"));
        n.render_ref = nj.at("render_ref").get<std::string>();
      }
      if (!(n.size.w > 0) || !(n.size.h > 0)) throw bad("node '" + n.id + "' has a non-positive size");
      std::string id = n.id;
      if (!doc.nodes_.emplace(id, std::move(n)).second) throw bad("duplicate node id '" + id + "'");
    }
    for (const auto& ej : j.at("edges")) {
      ProvenanceEdge e;
      e.from = ej.at("from").get<std::string>();
      e.to = ej.at("to").get<std::string>();
      auto kind = edge_kind_from_string(ej.at("kind").get<std::string>());
      if (!kind) throw bad("unknown edge kind");
      e.kind = *kind;
      e.created_at = ej.at("created_at").get<std::int64_t>();
      doc.edges_.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  } catch (const Error& e) {
    if (e.code() == errc::kMalformedDocument) throw;
    throw bad(e.what());
  }

  std::set<std::int64_t> live_z;
  for (const auto& [id, n] : doc.nodes_) {
    if (n.z >= doc.next_z_) throw bad("next_z does not exceed every z");
    if (!n.tombstone && !live_z.insert(n.z).second) throw bad("duplicate z among live nodes");
  }
  std::map<std::string, std::string> parent;
  for (const auto& e : doc.edges_) {
    if (!doc.nodes_.count(e.from) || !doc.nodes_.count(e.to)) throw bad("edge endpoint is not a node");
    if (e.from == e.to) throw bad("self edge on '" + e.from + "'");
    if (e.kind != EdgeKind::kGeneratedFromNote && !parent.emplace(e.to, e.from).second) {
      throw bad("node '" + e.to + "' has two lineage parents");
    }
  }
  // Each chain is walked once: 1 marks the current walk, 2 a chain known to end.
  std::map<std::string, int> state;
  for (const auto& [id, n] : doc.nodes_) {
    std::vector<std::string> walk;
    for (std::string cur = id;;) {
      int& st = state[cur];
      if (st == 2) break;
      if (st == 1) throw bad("lineage cycle through '" + cur + "'");
      st = 1;
      walk.push_back(cur);
      auto it = parent.find(cur);
      if (it == parent.end()) break;
      cur = it->second;
    }
    for (const auto& w : walk) state[w] = 2;
  }
  return doc;
}

}  // namespace incanvas::canvas
