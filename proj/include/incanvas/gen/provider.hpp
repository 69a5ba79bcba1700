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
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/chart/spec.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/data/value.hpp"
#include "incanvas/gen/prompt.hpp"
#include "incanvas/gen/rules.hpp"

namespace incanvas::gen {

inline constexpr std::chrono::milliseconds kDefaultProviderTimeout{30000};

struct ProviderRequest {
  PromptBundle prompt;
  std::string goal;
  std::optional<chart::ChartSpec> parent;
  std::shared_ptr<const data::Dataset> dataset;
};

/// A model stage: prompt in, raw text out. Implementations must not touch
/// engine state; they may be called from many threads at once.
class ModelProvider {
 public:
  virtual ~ModelProvider() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const ProviderRequest& request) = 0;
  virtual std::chrono::milliseconds timeout() const { return kDefaultProviderTimeout; }
};

/// Runs provider.complete() under its timeout. A call that overruns is
/// abandoned on a detached thread and reported as ProviderTimeout.
inline std::string complete_with_timeout(const std::shared_ptr<ModelProvider>& provider, const ProviderRequest& request) {
  auto promise = std::make_shared<std::promise<std::string>>();
  auto future = promise->get_future();
  std::thread([provider, request, promise] {
    try {
      promise->set_value(provider->complete(request));
    } catch (...) {
      promise->set_exception(std::current_exception());
    }
  }).detach();
  const auto limit = provider->timeout();
  if (future.wait_for(limit) != std::future_status::ready) {
    throw Error(errc::kProviderTimeout, "provider '" + provider->name() + "' did not answer in time",
                {{"provider", provider->name()}, {"timeout_ms", limit.count()}});
  }
  try {
    return future.get();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(errc::kProviderError, e.what(), {{"provider", provider->name()}});
  }
}

/// The rule-based generator behind the provider interface.
class RulesProvider : public ModelProvider {
 public:
  std::string name() const override { return "rules"; }
  std::string complete(const ProviderRequest& request) override {
    return chart::serialize(rule_based_generate(request.goal, *request.dataset, request.parent));
  }
};

/// Canned responses for tests. Responses are keyed by PromptBundle::hash();
/// a key may hold one text or a list consumed in order (the last repeats).
/// A response of the form {"error": "..."} raises ProviderError.
///
/// Fixture file:
///   {"responses": {"<hash>": "text" | ["text", ...]},
///    "default": "text" | [...], "delay_ms": 0, "timeout_ms": 30000}
class MockProvider : public ModelProvider {
 public:
  MockProvider() = default;

  /// Every call is answered from `script`, in order.
  explicit MockProvider(std::vector<nlohmann::json> script, std::chrono::milliseconds delay = {},
                        std::chrono::milliseconds timeout = kDefaultProviderTimeout)
      : default_(std::move(script)), delay_(delay), timeout_(timeout) {}

  static std::shared_ptr<MockProvider> from_json(const nlohmann::json& j) {
    auto p = std::make_shared<MockProvider>();
    auto as_list = [](const nlohmann::json& v) {
      return v.is_array() ? v.get<std::vector<nlohmann::json>>() : std::vector<nlohmann::json>{v};
    };
    if (j.contains("responses")) {
      for (auto it = j["responses"].begin(); it != j["responses"].end(); ++it) p->by_hash_[it.key()] = as_list(it.value());
    }
    if (j.contains("default")) p->default_ = as_list(j["default"]);
    p->delay_ = std::chrono::milliseconds(j.value("delay_ms", 0));
    p->timeout_ = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(kDefaultProviderTimeout.count())));
    return p;
  }

  static std::shared_ptr<MockProvider> from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::kProviderError, "cannot read mock fixture '" + path + "'");
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw Error(errc::kProviderError, "bad mock fixture '" + path + "': " + e.what());
    }
  }

  std::string name() const override { return "mock"; }
  std::chrono::milliseconds timeout() const override { return timeout_; }

  std::string complete(const ProviderRequest& request) override {
    nlohmann::json reply;
    {
      std::lock_guard lock(mu_);
      const std::string key = request.prompt.hash();
      auto it = by_hash_.find(key);
      const auto& list = it != by_hash_.end() ? it->second : default_;
      if (list.empty()) throw Error(errc::kProviderError, "mock has no response for prompt " + key);
      std::size_t& n = cursor_[it != by_hash_.end() ? key : std::string()];
      reply = list[std::min(n, list.size() - 1)];
      ++n;
      ++calls_;
    }
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    if (reply.is_object() && reply.contains("error")) {
      throw Error(errc::kProviderError, reply["error"].get<std::string>(), {{"provider", "mock"}});
    }
    return reply.is_string() ? reply.get<std::string>() : reply.dump();
  }

  std::size_t calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }

 private:
  std::map<std::string, std::vector<nlohmann::json>> by_hash_;
  std::vector<nlohmann::json> default_;
  std::chrono::milliseconds delay_{0};
  std::chrono::milliseconds timeout_{kDefaultProviderTimeout};
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> cursor_;
  std::size_t calls_ = 0;
};

/// Name → provider. Filled at startup, read-only afterwards.
class ProviderRegistry {
 public:
  ProviderRegistry& add(std::shared_ptr<ModelProvider> provider) {
    auto name = provider->name();
    providers_[name] = std::move(provider);
    return *this;
  }

  std::shared_ptr<ModelProvider> get(const std::string& name) const {
    auto it = providers_.find(name);
    if (it == providers_.end()) throw Error(errc::kUnknownProvider, "no provider named '" + name + "'", {{"provider", name}});
    return it->second;
  }

  bool contains(const std::string& name) const { return providers_.count(name) != 0; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [n, _] : providers_) out.push_back(n);
    return out;
  }

 private:
  std::map<std::string, std::shared_ptr<ModelProvider>> providers_;
};

}  // namespace incanvas::gen
