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
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "incanvas/common/error.hpp"
#include "incanvas/common/ids.hpp"
#include "incanvas/gen/generator.hpp"
#include "incanvas/server/store.hpp"

namespace incanvas::server {

enum class JobState { kQueued, kPrompting, kAwaitingModel, kValidating, kRepairing, kCompiling, kDone, kFailed };

inline constexpr JobState kAllJobStates[] = {JobState::kQueued,     JobState::kPrompting, JobState::kAwaitingModel,
                                             JobState::kValidating, JobState::kRepairing, JobState::kCompiling,
                                             JobState::kDone,       JobState::kFailed};

inline std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::kQueued: return "queued";
    case JobState::kPrompting: return "prompting";
    case JobState::kAwaitingModel: return "awaiting_model";
    case JobState::kValidating: return "validating";
    case JobState::kRepairing: return "repairing";
    case JobState::kCompiling: return "compiling";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "?";
}

inline std::optional<JobState> job_state_from_string(std::string_view s) {
  for (auto st : kAllJobStates) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

inline bool is_terminal(JobState s) { return s == JobState::kDone || s == JobState::kFailed; }

inline JobState job_state(gen::Stage s) {
  switch (s) {
    case gen::Stage::kPrompting: return JobState::kPrompting;
    case gen::Stage::kAwaitingModel: return JobState::kAwaitingModel;
    case gen::Stage::kValidating: return JobState::kValidating;
    case gen::Stage::kRepairing: return JobState::kRepairing;
    case gen::Stage::kCompiling: return JobState::kCompiling;
  }
  return JobState::kFailed;
}

struct JobEvent {
  std::size_t seq = 0;
  JobState state = JobState::kQueued;
  std::int64_t at = 0;  // ms since epoch

  nlohmann::ordered_json to_json() const {
    return {{"seq", seq}, {"state", std::string(to_string(state))}, {"at", at}};
  }
};

struct Job {
  std::string id;
  std::string kind;  // "generate" or "revise"
  nlohmann::ordered_json request;
  std::vector<JobEvent> events;
  std::optional<nlohmann::ordered_json> result;
  std::optional<nlohmann::ordered_json> error;

  JobState state() const { return events.empty() ? JobState::kQueued : events.back().state; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["job_id"] = id;
    j["kind"] = kind;
    j["state"] = std::string(to_string(state()));
    j["request"] = request;
    auto ev = nlohmann::ordered_json::array();
    for (const auto& e : events) ev.push_back(e.to_json());
    j["events"] = std::move(ev);
    j["result"] = result ? *result : nlohmann::ordered_json();
    j["error"] = error ? *error : nlohmann::ordered_json();
    return j;
  }
};

/// Bounded worker pool for generation jobs. Every state transition is appended
/// to the store's job log before it becomes visible, so the event stream and
/// the log agree. Consecutive duplicate states collapse into one event.
class JobManager {
 public:
  using Advance = std::function<void(JobState)>;
  using Task = std::function<nlohmann::ordered_json(const Advance&)>;

  JobManager(FileStore& store, int workers, std::size_t max_queue) : store_(store), max_queue_(max_queue) {
    for (int i = 0; i < workers; ++i) workers_.emplace_back([this] { work(); });
  }

  ~JobManager() { stop(); }

  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  /// Rebuilds jobs from the log. Jobs that never reached a terminal state
  /// were cut off by a restart and are failed with a restart marker.
  void restore() {
    std::map<std::string, Job> loaded;
    std::vector<std::string> order;
    for (const auto& r : store_.load_job_records()) {
      const auto id = r.value("job_id", std::string());
      auto state = job_state_from_string(r.value("state", std::string()));
      if (id.empty() || !state) continue;
      auto [it, fresh] = loaded.try_emplace(id);
      Job& job = it->second;
      if (fresh) {
        job.id = id;
        order.push_back(id);
      }
      if (r.contains("kind")) job.kind = r["kind"].get<std::string>();
      if (r.contains("request")) job.request = nlohmann::ordered_json::parse(r["request"].dump());
      if (r.contains("result")) job.result = nlohmann::ordered_json::parse(r["result"].dump());
      if (r.contains("error")) job.error = nlohmann::ordered_json::parse(r["error"].dump());
      job.events.push_back({job.events.size(), *state, r.value("at", std::int64_t{0})});
    }
    std::lock_guard lock(mu_);
    for (auto& id : order) {
      Job& job = loaded[id];
      if (!is_terminal(job.state())) {
        job.error = Error(errc::kServerRestarted, "server restarted before the job finished", {{"restart_marker", true}})
                        .to_json();
        append_locked(job, JobState::kFailed);
      }
      jobs_[id] = std::move(job);
    }
  }

  /// Enqueues without blocking; QueueFull when the pending queue is at its bound.
  std::string submit(std::string kind, nlohmann::ordered_json request, Task task) {
    std::lock_guard lock(mu_);
    if (stopping_) throw Error(errc::kQueueFull, "server is shutting down");
    if (pending_.size() >= max_queue_) {
      throw Error(errc::kQueueFull, "job queue is full", {{"max_queue", max_queue_}});
    }
    Job job;
    job.id = IdGenerator::next("job");
    job.kind = std::move(kind);
    job.request = std::move(request);
    const std::string id = job.id;
    auto [it, _] = jobs_.emplace(id, std::move(job));
    append_locked(it->second, JobState::kQueued);
    pending_.push_back({id, std::move(task)});
    work_cv_.notify_one();
    return id;
  }

  std::optional<Job> snapshot(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<Job> list() const {
    std::lock_guard lock(mu_);
    std::vector<Job> out;
    for (const auto& [id, j] : jobs_) out.push_back(j);
    return out;
  }

  /// Events with seq >= `from`, waiting up to `timeout` for at least one.
  std::vector<JobEvent> events_from(const std::string& id, std::size_t from, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    auto ready = [&] {
      auto it = jobs_.find(id);
      return stopping_ || it == jobs_.end() || it->second.events.size() > from;
    };
    event_cv_.wait_for(lock, timeout, ready);
    auto it = jobs_.find(id);
    if (it == jobs_.end() || it->second.events.size() <= from) return {};
    return {it->second.events.begin() + static_cast<std::ptrdiff_t>(from), it->second.events.end()};
  }

  bool stopping() const {
    std::lock_guard lock(mu_);
    return stopping_;
  }

  /// Blocks until the job is terminal or the timeout passes.
  std::optional<Job> wait(const std::string& id, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    event_cv_.wait_for(lock, timeout, [&] {
      auto it = jobs_.find(id);
      return it == jobs_.end() || is_terminal(it->second.state());
    });
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
  }

  /// Finishes running jobs; queued ones stay unfinished in the log.
  void stop() {
    {
      std::lock_guard lock(mu_);
      if (stopping_) return;
      stopping_ = true;
    }
    work_cv_.notify_all();
    event_cv_.notify_all();
    for (auto& t : workers_) {
      if (t.joinable()) t.join();
    }
  }

 private:
  struct Pending {
    std::string id;
    Task task;
  };

  void append_locked(Job& job, JobState state) {
    if (!job.events.empty() && job.events.back().state == state) return;
    JobEvent ev{job.events.size(), state, now_millis()};
    nlohmann::ordered_json record;
    record["job_id"] = job.id;
    record["seq"] = ev.seq;
    record["state"] = std::string(to_string(state));
    record["at"] = ev.at;
    if (state == JobState::kQueued) {
      record["kind"] = job.kind;
      record["request"] = job.request;
    }
    if (state == JobState::kDone && job.result) record["result"] = *job.result;
    if (state == JobState::kFailed && job.error) record["error"] = *job.error;
    store_.append_job_record(record);
    job.events.push_back(ev);
    event_cv_.notify_all();
  }

  void advance(const std::string& id, JobState state) {
    std::lock_guard lock(mu_);
    append_locked(jobs_.at(id), state);
  }

  void work() {
    for (;;) {
      Pending p;
      {
        std::unique_lock lock(mu_);
        work_cv_.wait(lock, [&] { return stopping_ || !pending_.empty(); });
        if (stopping_) return;
        p = std::move(pending_.front());
        pending_.pop_front();
      }
      try {
        auto result = p.task([&](JobState s) { advance(p.id, s); });
        std::lock_guard lock(mu_);
        Job& job = jobs_.at(p.id);
        job.result = std::move(result);
        append_locked(job, JobState::kDone);
      } catch (const Error& e) {
        std::lock_guard lock(mu_);
        Job& job = jobs_.at(p.id);
        job.error = e.to_json();
        append_locked(job, JobState::kFailed);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu_);
        Job& job = jobs_.at(p.id);
        job.error = Error(errc::kInternalError, e.what()).to_json();
        append_locked(job, JobState::kFailed);
      }
    }
  }

  FileStore& store_;
  const std::size_t max_queue_;
  mutable std::mutex mu_;
  std::condition_variable work_cv_;
  mutable std::condition_variable event_cv_;
  std::map<std::string, Job> jobs_;
  std::deque<Pending> pending_;
  std::vector<std::thread> workers_;
  bool stopping_ = false;
};

}  // namespace incanvas::server
