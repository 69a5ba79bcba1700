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

#include <cstdlib>
#include <optional>
#include <string>

#include "incanvas/common/error.hpp"
#include "incanvas/gen/http_provider.hpp"

namespace incanvas::server {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "incanvas-data";
  std::string provider = "rules";  // default provider for requests that name none
  int max_jobs = 4;                // concurrent generation workers
  std::size_t max_queue = 64;      // pending jobs before 429
  bool fallback_to_rules = true;
  std::size_t max_upload_bytes = 32 * 1024 * 1024;
  std::optional<gen::HttpProviderConfig> http;
  std::string mock_fixture;  // registers the "mock" provider when set

  /// "host:port" or ":port".
  void set_listen(const std::string& listen) {
    auto colon = listen.rfind(':');
    if (colon == std::string::npos) throw Error(errc::kInvalidRequest, "listen address needs host:port", {{"listen", listen}});
    if (colon > 0) host = listen.substr(0, colon);
    try {
      port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(errc::kInvalidRequest, "bad port in listen address", {{"listen", listen}});
    }
  }

  /// INCANVAS_LISTEN, INCANVAS_DATA_DIR, INCANVAS_PROVIDER, INCANVAS_MAX_JOBS,
  /// INCANVAS_MAX_QUEUE, INCANVAS_FALLBACK, INCANVAS_MAX_UPLOAD_BYTES,
  /// INCANVAS_MOCK_FIXTURE and the INCANVAS_LLM_* provider variables.
  static ServerConfig from_env() {
    ServerConfig c;
    auto env = [](const char* k) -> std::optional<std::string> {
      const char* v = std::getenv(k);
      if (!v || !*v) return std::nullopt;
      return std::string(v);
    };
    if (auto v = env("INCANVAS_LISTEN")) c.set_listen(*v);
    if (auto v = env("INCANVAS_DATA_DIR")) c.data_dir = *v;
    if (auto v = env("INCANVAS_PROVIDER")) c.provider = *v;
    if (auto v = env("INCANVAS_MAX_JOBS")) c.max_jobs = std::stoi(*v);
    if (auto v = env("INCANVAS_MAX_QUEUE")) c.max_queue = std::stoul(*v);
    if (auto v = env("INCANVAS_FALLBACK")) c.fallback_to_rules = *v != "0" && *v != "false";
    if (auto v = env("INCANVAS_MAX_UPLOAD_BYTES")) c.max_upload_bytes = std::stoul(*v);
    if (auto v = env("INCANVAS_MOCK_FIXTURE")) c.mock_fixture = *v;
    c.http = gen::HttpProviderConfig::from_env();
    return c;
  }

  void validate() const {
    if (max_jobs < 1) throw Error(errc::kInvalidRequest, "max_jobs must be at least 1", {{"max_jobs", max_jobs}});
    if (max_queue < 1) throw Error(errc::kInvalidRequest, "max_queue must be at least 1");
    if (port < 0 || port > 65535) throw Error(errc::kInvalidRequest, "port out of range", {{"port", port}});
  }
};

}  // namespace incanvas::server
