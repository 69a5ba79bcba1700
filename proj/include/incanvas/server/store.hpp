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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/canvas/document.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/data/value.hpp"

namespace incanvas::server {

namespace fs = std::filesystem;

// Columnar snapshot of an ingested dataset. Cells are typed by their column,
// so temporal values travel as ISO strings.
inline nlohmann::ordered_json dataset_to_json(const data::Dataset& ds) {
  nlohmann::ordered_json j;
  j["id"] = ds.id;
  j["name"] = ds.name;
  j["row_count"] = ds.row_count;
  auto cols = nlohmann::ordered_json::array();
  for (const auto& c : ds.columns) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["type"] = std::string(data::to_string(c.ctype));
    auto cells = nlohmann::ordered_json::array();
    for (const auto& v : c.cells) cells.push_back(data::value_to_json(v));
    cj["cells"] = std::move(cells);
    cols.push_back(std::move(cj));
  }
  j["columns"] = std::move(cols);
  return j;
}

inline data::Dataset dataset_from_json(const nlohmann::json& j) {
  data::Dataset ds;
  ds.id = j.at("id").get<std::string>();
  ds.name = j.at("name").get<std::string>();
  ds.row_count = j.at("row_count").get<std::size_t>();
  for (const auto& cj : j.at("columns")) {
    data::Column c;
    c.name = cj.at("name").get<std::string>();
    auto t = data::column_type_from_string(cj.at("type").get<std::string>());
    if (!t) throw Error(errc::kMalformedDocument, "unknown column type in dataset snapshot");
    c.ctype = *t;
    for (const auto& v : cj.at("cells")) {
      if (v.is_null()) {
        c.cells.emplace_back();
      } else if (c.ctype == data::ColumnType::kQuantitative) {
        c.cells.emplace_back(v.get<double>());
      } else if (c.ctype == data::ColumnType::kTemporal) {
        auto d = data::parse_date(v.get<std::string>());
        if (!d) throw Error(errc::kMalformedDocument, "bad date in dataset snapshot");
        c.cells.emplace_back(*d);
      } else {
        c.cells.emplace_back(v.get<std::string>());
      }
    }
    if (c.cells.size() != ds.row_count) throw Error(errc::kMalformedDocument, "column length mismatch in snapshot");
    ds.columns.push_back(std::move(c));
  }
  return ds;
}

/// Files under the data directory:
///   datasets/<id>.json    columnar dataset snapshots
///   documents/<id>.json   canvas documents
///   jobs.jsonl            job transition log, one JSON object per line
/// Whole-file writes go through a temp file and rename, so a crash leaves
/// either the old or the new version. The job log is append-only; a torn
/// final line is ignored on load.
class FileStore {
 public:
  explicit FileStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_ / "datasets");
    fs::create_directories(root_ / "documents");
  }

  const fs::path& root() const { return root_; }

  void save_dataset(const data::Dataset& ds) { write_atomic(root_ / "datasets" / (ds.id + ".json"), dataset_to_json(ds).dump()); }

  void save_document(const canvas::CanvasDocument& doc) {
    write_atomic(root_ / "documents" / (doc.id() + ".json"), doc.to_json().dump());
  }

  std::vector<data::Dataset> load_datasets() const {
    std::vector<data::Dataset> out;
    for (const auto& path : json_files("datasets")) out.push_back(dataset_from_json(nlohmann::json::parse(read(path))));
    return out;
  }

  std::vector<canvas::CanvasDocument> load_documents() const {
    std::vector<canvas::CanvasDocument> out;
    for (const auto& path : json_files("documents")) {
      out.push_back(canvas::CanvasDocument::from_json(nlohmann::json::parse(read(path))));
    }
    return out;
  }

  void append_job_record(const nlohmann::ordered_json& record) {
    std::lock_guard lock(log_mu_);
    std::ofstream out(root_ / "jobs.jsonl", std::ios::app | std::ios::binary);
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw Error(errc::kStorageError, "cannot append to job log");
  }

  std::vector<nlohmann::json> load_job_records() const {
    std::vector<nlohmann::json> out;
    std::ifstream in(root_ / "jobs.jsonl", std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        out.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::parse_error&) {
        // torn write from a crash; everything after it is suspect too
        break;
      }
    }
    return out;
  }

 private:
  static void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.flush();
      if (!out) throw Error(errc::kStorageError, "cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
  }

  static std::string read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<fs::path> json_files(const char* dir) const {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(root_ / dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  fs::path root_;
  std::mutex log_mu_;
};

}  // namespace incanvas::server
