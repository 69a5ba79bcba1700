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

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "incanvas/common/error.hpp"
#include "incanvas/gen/provider.hpp"

namespace incanvas::gen {

struct HttpProviderConfig {
  std::string endpoint;  // full URL of an OpenAI-compatible chat completions route
  std::string model;
  std::string api_key;
  std::chrono::milliseconds timeout = kDefaultProviderTimeout;

  /// INCANVAS_LLM_ENDPOINT, INCANVAS_LLM_MODEL, INCANVAS_LLM_API_KEY,
  /// INCANVAS_LLM_TIMEOUT_S. Empty when no endpoint is set.
  static std::optional<HttpProviderConfig> from_env() {
    auto env = [](const char* k) {
      const char* v = std::getenv(k);
      return v ? std::string(v) : std::string();
    };
    HttpProviderConfig c;
    c.endpoint = env("INCANVAS_LLM_ENDPOINT");
    if (c.endpoint.empty()) return std::nullopt;
    c.model = env("INCANVAS_LLM_MODEL");
    c.api_key = env("INCANVAS_LLM_API_KEY");
    if (auto t = env("INCANVAS_LLM_TIMEOUT_S"); !t.empty()) {
      c.timeout = std::chrono::milliseconds(static_cast<long long>(std::stod(t) * 1000));
    }
    return c;
  }
};

/// Live model over HTTP (chat completions wire format).
class HttpProvider : public ModelProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    auto scheme_end = config_.endpoint.find("://");
    auto path_start = config_.endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    origin_ = config_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/v1/chat/completions" : config_.endpoint.substr(path_start);
  }

  std::string name() const override { return "http"; }
  std::chrono::milliseconds timeout() const override { return config_.timeout; }

  std::string complete(const ProviderRequest& request) override {
    httplib::Client client(origin_);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count() + 1;
    client.set_connection_timeout(static_cast<time_t>(secs), 0);
    client.set_read_timeout(static_cast<time_t>(secs), 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    nlohmann::ordered_json body;
    body["model"] = config_.model;
    body["temperature"] = 0;
    body["messages"] = {{{"role", "system"}, {"content", request.prompt.system}},
                        {{"role", "user"}, {"content", request.prompt.user}}};
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
      throw Error(errc::kProviderError, "request to model endpoint failed: " + httplib::to_string(res.error()),
                  {{"provider", name()}});
    }
    if (res->status != 200) {
      throw Error(errc::kProviderError, "model endpoint answered HTTP " + std::to_string(res->status),
                  {{"provider", name()}, {"status", res->status}});
    }
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(errc::kProviderError, std::string("unexpected model response: ") + e.what(), {{"provider", name()}});
    }
  }

 private:
  HttpProviderConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace incanvas::gen
