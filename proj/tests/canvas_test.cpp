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

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>
#include <string>

#include "incanvas/canvas/document.hpp"
#include "incanvas/data/ingest.hpp"
#include "oracles/random_tables.hpp"
#include "support/canvas_ops.hpp"

namespace incanvas::canvas {
namespace {

using chart::Channel;
using chart::ChartSpec;

const data::Dataset& table() {
  static const data::Dataset ds = data::ingest_csv("g,a,b\nx,1,2\ny,2,3\nz,3,5\n", "t");
  return ds;
}

ChartSpec scatter(std::string x = "a", std::string y = "b") {
  ChartSpec s;
  s.encodings[Channel::kX] = {std::move(x), std::nullopt, std::nullopt};
  s.encodings[Channel::kY] = {std::move(y), std::nullopt, std::nullopt};
  return s;
}

std::string error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

CanvasDocument doc() { return CanvasDocument("d1", table().id); }

TEST(Canvas, CreateNote) {
  auto d = doc();
  auto n = d.create_note({0, 0}, "birth rate vs gdp");
  EXPECT_EQ(d.node(n).kind, NodeKind::kNote);
  EXPECT_EQ(d.node(n).size, kNoteSize);
  EXPECT_EQ(d.doc_version(), 1);
}

TEST(Canvas, SecondNoteIsHigher) {
  auto d = doc();
  auto a = d.create_note({0, 0}, "a");
  auto b = d.create_note({0, 0}, "b");
  EXPECT_NE(a, b);
  EXPECT_LT(a, b);  // ids sort by creation
  EXPECT_GT(d.node(b).z, d.node(a).z);
}

TEST(Canvas, EmptyNoteText) {
  auto d = doc();
  EXPECT_EQ(error_code([&] { d.create_note({0, 0}, ""); }), "InvalidText");
  EXPECT_EQ(error_code([&] { d.create_note({0, 0}, " \n"); }), "InvalidText");
  EXPECT_EQ(d.doc_version(), 0);
}

TEST(Canvas, VisualizationFromNoteGoesBelow) {
  auto d = doc();
  auto n = d.create_note({10, 20}, "q");
  auto v = d.create_visualization(std::nullopt, scatter(), table(), n);
  ASSERT_EQ(d.edges().size(), 1u);
  EXPECT_EQ(d.edges()[0].from, n);
  EXPECT_EQ(d.edges()[0].to, v);
  EXPECT_EQ(d.edges()[0].kind, EdgeKind::kGeneratedFromNote);
  EXPECT_EQ(d.node(v).position, (Point{10, 20 + 80 + 16}));
  EXPECT_EQ(d.node(v).render_ref, render_key(table().id, scatter()));
}

TEST(Canvas, RevisionChildGoesRightWithDerivedEdge) {
  auto d = doc();
  auto v1 = d.create_visualization(Point{0, 0}, scatter(), table());
  auto v2 = d.create_visualization(std::nullopt, scatter("b", "a"), table(), v1, EdgeKind::kDerivedFrom);
  EXPECT_EQ(d.edges().back(), (ProvenanceEdge{v1, v2, EdgeKind::kDerivedFrom, d.edges().back().created_at}));
  EXPECT_EQ(d.node(v2).position, (Point{480 + 24, 0}));
}

TEST(Canvas, VisualizationErrors) {
  auto d = doc();
  auto n = d.create_note({0, 0}, "q");
  d.delete_node(n);
  EXPECT_EQ(error_code([&] { d.create_visualization(std::nullopt, scatter(), table(), n); }), "UnknownSourceNode");
  EXPECT_EQ(error_code([&] { d.create_visualization(std::nullopt, scatter(), table(), std::string("n999")); }),
            "UnknownSourceNode");
  EXPECT_EQ(error_code([&] { d.create_visualization(std::nullopt, scatter("a", "zz"), table()); }), "InvalidSpec");
}

TEST(Canvas, MoveRaisesZ) {
  auto d = doc();
  auto a = d.create_note({0, 0}, "a");
  d.create_note({0, 0}, "b");
  auto before = d.doc_version();
  auto v = d.move_node(a, {100, 50});
  EXPECT_EQ(v, before + 1);
  EXPECT_EQ(d.node(a).position, (Point{100, 50}));
  std::int64_t max_z = 0;
  for (const auto& [id, n] : d.nodes()) max_z = std::max(max_z, n.z);
  EXPECT_EQ(d.node(a).z, max_z);
  EXPECT_EQ(d.node(a).size, kNoteSize);
}

TEST(Canvas, ResizeRejectsNonPositive) {
  auto d = doc();
  auto a = d.create_note({0, 0}, "a");
  EXPECT_EQ(error_code([&] { d.resize_node(a, {0, 10}); }), "NonPositiveSize");
  EXPECT_EQ(error_code([&] { d.resize_node(a, {10, -1}); }), "NonPositiveSize");
  d.resize_node(a, {300, 90});
  EXPECT_EQ(d.node(a).size, (Size{300, 90}));
  EXPECT_EQ(error_code([&] { d.move_node("n404", {0, 0}); }), "UnknownNode");
}

TEST(Canvas, MoveThenRoundTrip) {
  auto d = doc();
  auto a = d.create_note({0, 0}, "a");
  d.move_node(a, {100.25, -50.5});
  auto back = CanvasDocument::from_json(nlohmann::json::parse(d.to_json().dump()));
  EXPECT_EQ(back.node(a).position, (Point{100.25, -50.5}));
  EXPECT_EQ(back, d);
}

TEST(Canvas, DuplicateCopiesSpecAndOffsets) {
  auto d = doc();
  auto v1 = d.create_visualization(Point{5, 5}, scatter(), table());
  auto v2 = d.duplicate_node(v1);
  EXPECT_EQ(chart::serialize(*d.node(v2).spec), chart::serialize(*d.node(v1).spec));
  EXPECT_EQ(d.node(v2).position, (Point{29, 29}));
  EXPECT_EQ(d.edges().back().kind, EdgeKind::kDuplicatedFrom);
  EXPECT_EQ(d.lineage(v2), std::vector<std::string>{v1});
}

TEST(Canvas, DuplicateThenReviseLeavesOriginal) {
  auto d = doc();
  auto v1 = d.create_visualization(Point{0, 0}, scatter(), table());
  auto before = chart::serialize(*d.node(v1).spec);
  auto v2 = d.duplicate_node(v1);
  d.create_visualization(std::nullopt, scatter("b", "a"), table(), v2, EdgeKind::kDerivedFrom);
  d.move_node(v2, {1, 1});
  EXPECT_EQ(chart::serialize(*d.node(v1).spec), before);
}

TEST(Canvas, DuplicateNoteFails) {
  auto d = doc();
  auto n = d.create_note({0, 0}, "a");
  EXPECT_EQ(error_code([&] { d.duplicate_node(n); }), "NotAVisualization");
}

TEST(Canvas, DeleteKeepsLineage) {
  auto d = doc();
  auto v1 = d.create_visualization(Point{0, 0}, scatter(), table());
  auto v2 = d.create_visualization(std::nullopt, scatter("b", "a"), table(), v1, EdgeKind::kDerivedFrom);
  d.delete_node(v1);
  EXPECT_TRUE(d.node(v1).tombstone);
  EXPECT_EQ(d.lineage(v2), std::vector<std::string>{v1});
  EXPECT_EQ(error_code([&] { d.delete_node(v1); }), "UnknownNode");
  auto back = CanvasDocument::from_json(nlohmann::json::parse(d.to_json().dump()));
  EXPECT_TRUE(back.node(v1).tombstone);
}

TEST(Canvas, LineageChains) {
  auto d = doc();
  auto n = d.create_note({0, 0}, "q");
  auto v1 = d.create_visualization(std::nullopt, scatter(), table(), n);
  auto v2 = d.create_visualization(std::nullopt, scatter(), table(), v1, EdgeKind::kDerivedFrom);
  auto v3 = d.create_visualization(std::nullopt, scatter(), table(), v2, EdgeKind::kDerivedFrom);
  EXPECT_EQ(d.lineage(v3), (std::vector<std::string>{v2, v1}));
  EXPECT_TRUE(d.lineage(v1).empty());  // generated-from-note is not lineage
  EXPECT_EQ(error_code([&] { d.lineage("n999"); }), "UnknownNode");
}

TEST(Canvas, EmptyDocumentRoundTrip) {
  auto d = doc();
  EXPECT_EQ(CanvasDocument::from_json(nlohmann::json::parse(d.to_json().dump())), d);
}

TEST(Canvas, RejectsBadDocuments) {
  auto j = nlohmann::json::parse(doc().to_json().dump());
  j["format_version"] = 99;
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(j); }), "UnsupportedVersion");
  j.erase("format_version");
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(j); }), "MalformedDocument");

  auto d = doc();
  auto v1 = d.create_visualization(Point{0, 0}, scatter(), table());
  auto v2 = d.duplicate_node(v1);
  auto good = nlohmann::json::parse(d.to_json().dump());
  auto cyc = good;
  cyc["edges"].push_back({{"from", v2}, {"to", v1}, {"kind", "derived-from"}, {"created_at", 0}});
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(cyc); }), "MalformedDocument");
  auto dangling = good;
  dangling["edges"][0]["to"] = "n999";
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(dangling); }), "MalformedDocument");
  auto zdup = good;
  zdup["nodes"][1]["z"] = zdup["nodes"][0]["z"];
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(zdup); }), "MalformedDocument");
  auto badsize = good;
  badsize["nodes"][0]["size"]["w"] = 0;
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(badsize); }), "MalformedDocument");
  auto badspec = good;
  badspec["nodes"][0]["spec"]["mark"] = "pie";
  EXPECT_EQ(error_code([&] { CanvasDocument::from_json(badspec); }), "MalformedDocument");
}

// ---------------------------------------------------------------------------
// random operation sequences

TEST(CanvasProperties, RandomSequencesKeepInvariants) {
  std::mt19937_64 rng(8);
  for (int s = 0; s < 200; ++s) {
    auto d = doc();
    ASSERT_EQ(canvas_ops::random_ops(rng, d, gen::pick(rng, 0, 200)), "") << "sequence " << s;
    ASSERT_EQ(canvas_ops::round_trip(d), "") << "sequence " << s;
  }
}

TEST(CanvasProperties, DuplicateIndependence) {
  auto d = doc();
  auto v1 = d.create_visualization(Point{0, 0}, scatter(), table());
  auto v2 = d.duplicate_node(v1);
  auto s1 = chart::serialize(*d.node(v1).spec);
  auto s2 = chart::serialize(*d.node(v2).spec);
  d.move_node(v1, {9, 9});
  d.resize_node(v2, {10, 10});
  d.delete_node(v1);
  EXPECT_EQ(chart::serialize(*d.node(v1).spec), s1);
  EXPECT_EQ(chart::serialize(*d.node(v2).spec), s2);
}

}  // namespace
}  // namespace incanvas::canvas
