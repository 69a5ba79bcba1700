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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs without any UI; the durability check drives the real
// CLI binary as a child process.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "incanvas/incanvas.hpp"
#include "oracles/pearson_oracle.hpp"
#include "oracles/query_oracle.hpp"
#include "oracles/random_tables.hpp"
#include "support/adversarial.hpp"
#include "support/canvas_ops.hpp"
#include "support/server_harness.hpp"

extern char** environ;

namespace {

using harness::Client;
using harness::json;
using harness::TempDir;
using harness::TestServer;
using namespace std::chrono_literals;
namespace data = incanvas::data;
namespace chart = incanvas::chart;
namespace igen = incanvas::gen;

const std::string kAnalysisQuestion =
    "How social-economic factors e.g. GDP per capita, minimum wage influence the birth rate of a country?";
const std::vector<std::string> kHappyPath = {"queued", "prompting", "awaiting_model", "validating", "compiling", "done"};

/// Thrown by check(); the message becomes the FAIL reason.
struct Failed {
  std::string why;
};

void check(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome run(const std::function<std::string()>& body) {
  try {
    return {true, body()};
  } catch (const Failed& f) {
    return {false, f.why};
  } catch (const incanvas::Error& e) {
    return {false, "unexpected error " + e.to_json().dump()};
  } catch (const std::exception& e) {
    return {false, std::string("unexpected exception: ") + e.what()};
  }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 1) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::shared_ptr<const data::Dataset> countries() {
  static const auto ds = std::make_shared<const data::Dataset>(data::ingest_csv(harness::fixture_csv(), "countries"));
  return ds;
}

json generate_body(const std::string& ds, const std::string& doc, const std::string& goal) {
  return {{"dataset_id", ds}, {"document_id", doc}, {"goal_text", goal}};
}

// ---------------------------------------------------------------------------

std::string fixture_pipeline() {
  const auto& ds = *countries();
  check(ds.columns.size() == 26, "expected 26 columns, got " + std::to_string(ds.columns.size()));
  check(ds.row_count == 20, "expected 20 rows, got " + std::to_string(ds.row_count));

  const auto a = igen::suggest_prompts(ds, 5);
  check(a == igen::suggest_prompts(ds, 5), "suggest_prompts is not deterministic");
  check(a.size() == 5, "expected 5 suggestions");

  auto spec = igen::rule_based_generate(kAnalysisQuestion, ds, std::nullopt);
  check(chart::validate_spec(spec, ds).valid(), "rules spec for the analysis question does not validate");
  check(spec.mark == chart::Mark::kScatter, "analysis question did not give a scatter");
  check(spec.encoding(chart::Channel::kX)->column == "GDP per capita", "x is not GDP per capita");
  check(spec.encoding(chart::Channel::kY)->column == "Birth Rate", "y is not Birth Rate");

  TempDir dir;
  TestServer server(harness::config_for(dir));
  auto api = server.client();
  auto [dataset_id, doc_id] = harness::fixture_document(api);
  auto s1 = api.get("/datasets/" + dataset_id + "/suggestions?k=3");
  check(s1.status == 200 && s1.body["suggestions"].size() == 3, "suggestions endpoint: " + s1.raw);
  check(s1.raw == api.get("/datasets/" + dataset_id + "/suggestions?k=3").raw, "suggestions endpoint is not deterministic");

  double worst = 0;
  constexpr int kRuns = 10;
  for (int i = 0; i < kRuns; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = api.post("/generate", generate_body(dataset_id, doc_id, kAnalysisQuestion));
    check(r.status == 202, "POST /generate: " + r.raw);
    const auto job_id = r.body["job_id"].get<std::string>();
    auto states = api.stream_states(job_id);
    const double elapsed = ms_since(t0);
    check(states == kHappyPath, "unexpected state sequence for " + job_id);
    auto job = api.get("/jobs/" + job_id).body;
    check(job["result"]["spec"]["encodings"]["x"]["column"] == "GDP per capita" &&
              job["result"]["spec"]["encodings"]["y"]["column"] == "Birth Rate",
          "served spec differs: " + job["result"]["spec"].dump());
    worst = std::max(worst, elapsed);
  }
  check(worst < 100.0, "slowest POST /generate -> done took " + fmt(worst) + " ms");
  return "26 columns, 20 rows; scatter GDP per capita vs Birth Rate; slowest of " + std::to_string(kRuns) +
         " POST /generate -> done: " + fmt(worst) + " ms";
}

std::string correlation_oracle() {
  std::mt19937_64 rng(20260101);
  int compared = 0;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    auto ds = gen::numeric_table(rng, static_cast<std::size_t>(gen::pick(rng, 0, 30)), static_cast<std::size_t>(gen::pick(rng, 2, 6)));
    std::vector<std::string> names;
    for (const auto& c : ds.columns) names.push_back(c.name);
    auto m = data::correlation_matrix(ds, names);
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = 0; j < names.size(); ++j) {
        const auto& rij = m.r[i][j];
        const auto& rji = m.r[j][i];
        check(rij.has_value() == rji.has_value() && (!rij || *rij == *rji), "asymmetric entry in table " + std::to_string(t));
        if (i == j) {
          check(!rij || std::abs(*rij - 1.0) <= 1e-12, "diagonal off by more than 1e-12 in table " + std::to_string(t));
          continue;
        }
        auto want = oracle::pearson(ds.columns[i].cells, ds.columns[j].cells);
        check(rij.has_value() == want.has_value(), "defined/undefined mismatch in table " + std::to_string(t));
        if (want) {
          worst = std::max(worst, std::abs(*rij - *want));
          ++compared;
        }
      }
    }
  }
  check(worst <= 1e-9, "largest deviation " + std::to_string(worst));
  check(compared > 0, "no defined coefficients were compared");
  return "200 tables, " + std::to_string(compared) + " coefficients, max deviation " + [&] {
    std::ostringstream os;
    os << worst;
    return os.str();
  }();
}

std::string query_oracle() {
  std::mt19937_64 rng(20260102);
  std::map<std::string, int> features;
  for (int i = 0; i < 500; ++i) {
    auto ds = gen::mixed_table(rng, static_cast<std::size_t>(gen::pick(rng, 0, 50)));
    auto q = gen::random_query(rng, ds);
    if (!q.filters.empty()) ++features["filter"];
    if (q.has_aggregates() &&
        std::any_of(q.projections.begin(), q.projections.end(), [](const auto& p) { return !p.aggregate; })) {
      ++features["group"];
    }
    if (q.bins) ++features["bin"];
    if (q.sort) ++features["sort"];
    if (q.limit) ++features["limit"];
    auto got = data::execute_query(ds, q);
    auto want = oracle::evaluate(ds, q);
    check(got == want, "query " + std::to_string(i) + " differs from the nested-loop oracle");
  }
  std::string mix;
  for (const auto& [k, n] : features) mix += (mix.empty() ? "" : ", ") + k + " " + std::to_string(n);
  return "500 queries equal to the oracle (" + mix + ")";
}

std::string repair_convergence() {
  std::mt19937_64 rng(20260103);
  std::map<std::string, int> outcome;
  std::map<int, int> kinds;
  for (int i = 0; i < 100; ++i) {
    auto out = adversarial::model_output(rng, *countries());
    ++kinds[static_cast<int>(out.kind)];
    auto registry = std::make_shared<igen::ProviderRegistry>();
    registry->add(std::make_shared<igen::RulesProvider>());
    registry->add(std::make_shared<igen::MockProvider>(std::vector<nlohmann::json>{out.text}));
    igen::GenerationRequest req;
    req.dataset_id = countries()->id;
    req.goal_text = kAnalysisQuestion;
    req.provider = "mock";
    req.allow_fallback = i % 2 == 0;

    // run on a side thread so a hang is reported instead of stalling the suite
    auto promise = std::make_shared<std::promise<std::string>>();
    auto future = promise->get_future();
    std::thread([registry, req, promise] {
      try {
        igen::Generator g(registry);
        auto r = g.generate(req, countries());
        if (!chart::validate_spec(r.spec, *countries()).valid()) {
          promise->set_value("invalid spec returned");
        } else if (r.provider_used == "mock" && r.attempts > 1 + igen::kDefaultMaxRepairAttempts) {
          promise->set_value("more than 3 repairs");
        } else {
          promise->set_value(r.provider_used == "mock" ? (r.attempts > 1 ? "repaired" : "valid") : "fallback");
        }
      } catch (const incanvas::Error& e) {
        promise->set_value(e.code() == incanvas::errc::kGenerationFailed && e.detail().contains("causes")
                               ? "GenerationFailed"
                               : "unstructured error " + e.code());
      } catch (...) {
        promise->set_value("panic");
      }
    }).detach();
    check(future.wait_for(10s) == std::future_status::ready, "output " + std::to_string(i) + " hung");
    const auto result = future.get();
    check(result == "valid" || result == "repaired" || result == "fallback" || result == "GenerationFailed",
          "output " + std::to_string(i) + ": " + result + " for " + out.text);
    ++outcome[result];
  }
  check(kinds.size() == static_cast<std::size_t>(adversarial::kKindCount), "not every adversarial kind was generated");
  std::string mix;
  for (const auto& [k, n] : outcome) mix += (mix.empty() ? "" : ", ") + k + " " + std::to_string(n);
  return "100 outputs terminated (" + mix + ")";
}

std::string canvas_properties() {
  std::mt19937_64 rng(20260104);
  long ops = 0;
  for (int s = 0; s < 1000; ++s) {
    canvas_ops::CanvasDocument d("doc", canvas_ops::table().id);
    const int n = gen::pick(rng, 0, 200);
    ops += n;
    auto problem = canvas_ops::random_ops(rng, d, n);
    check(problem.empty(), "sequence " + std::to_string(s) + ": " + problem);
    problem = canvas_ops::round_trip(d);
    check(problem.empty(), "sequence " + std::to_string(s) + ": " + problem);
  }
  return "1000 sequences, " + std::to_string(ops) + " operations, all round trips equal";
}

std::string concurrency() {
  TempDir dir;
  TestServer server(harness::config_for(dir));
  auto api = server.client();
  auto [dataset_id, doc_id] = harness::fixture_document(api);
  const std::vector<std::string> goals = {kAnalysisQuestion,
                                          "distribution of Birth Rate",
                                          "correlation overview",
                                          "Life expectancy vs Infant mortality",
                                          "histogram of GDP",
                                          "Fertility Rate against Birth Rate",
                                          "spread of Minimum wage",
                                          "Population vs Urban_population"};
  std::vector<std::string> ids(goals.size());
  std::vector<std::vector<std::string>> streams(goals.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    threads.emplace_back([&, i] {
      auto r = api.post("/generate", generate_body(dataset_id, doc_id, goals[i]));
      if (r.status != 202) return;
      ids[i] = r.body["job_id"].get<std::string>();
      streams[i] = api.stream_states(ids[i]);
    });
  }
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < goals.size(); ++i) {
    check(!ids[i].empty(), "POST /generate was rejected for '" + goals[i] + "'");
    check(streams[i] == kHappyPath, "event stream of job " + std::to_string(i) + " is not the full ordered sequence");
    auto job = api.get("/jobs/" + ids[i]).body;
    check(job["state"] == "done", "job " + ids[i] + " ended " + job["state"].dump());
    check(job["result"]["spec"]["title"] == goals[i], "job " + ids[i] + " carries another job's result");
    std::vector<std::string> logged;
    for (const auto& e : job["events"]) logged.push_back(e["state"].get<std::string>());
    check(logged == kHappyPath, "persisted log of job " + ids[i] + " differs");
  }

  // conflicting moves: every writer holds the same doc_version
  auto note = api.post("/documents/" + doc_id + "/nodes",
                       {{"doc_version", api.get("/documents/" + doc_id).body["doc_version"]}, {"kind", "note"}, {"text", "contested"}});
  check(note.status == 201, "note creation: " + note.raw);
  const auto node = note.body["node"]["id"].get<std::string>();
  constexpr int kRounds = 20;
  constexpr int kWriters = 8;
  for (int round = 0; round < kRounds; ++round) {
    const auto version = api.get("/documents/" + doc_id).body["doc_version"].get<std::int64_t>();
    std::atomic<int> ok{0}, conflict{0}, other{0};
    std::vector<std::thread> writers;
    for (int w = 0; w < kWriters; ++w) {
      writers.emplace_back([&, w] {
        auto r = api.put("/documents/" + doc_id + "/nodes/" + node, {{"doc_version", version}, {"position", {{"x", w}, {"y", round}}}});
        if (r.status >= 200 && r.status < 300) {
          ++ok;
        } else if (r.status == 409) {
          ++conflict;
        } else {
          ++other;
        }
      });
    }
    for (auto& t : writers) t.join();
    check(ok == 1 && conflict == kWriters - 1 && other == 0,
          "round " + std::to_string(round) + ": " + std::to_string(ok.load()) + " ok, " + std::to_string(conflict.load()) +
              " conflicts, " + std::to_string(other.load()) + " other");
  }
  return "8 jobs done with full ordered event logs; " + std::to_string(kRounds) + " rounds of " + std::to_string(kWriters) +
         " conflicting moves each gave one 2xx and 7 x 409";
}

// ---------------------------------------------------------------------------
// durability: the real binary, killed with SIGKILL

struct Child {
  pid_t pid = -1;
  int port = -1;
};

Child spawn_server(const std::string& data_dir, const std::string& mock_fixture) {
  int fds[2];
  check(pipe(fds) == 0, "pipe failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_addclose(&actions, fds[1]);
  std::vector<std::string> args = {INCANVAS_CLI_PATH, "serve",          "--listen",        "127.0.0.1:0", "--data-dir",
                                   data_dir,          "--mock-fixture", mock_fixture, "--max-jobs",  "1"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  Child child;
  const int rc = posix_spawn(&child.pid, INCANVAS_CLI_PATH, &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(fds[1]);
  check(rc == 0, "cannot spawn " + std::string(INCANVAS_CLI_PATH));

  std::string line;
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  while (line.find('\n') == std::string::npos && std::chrono::steady_clock::now() < deadline) {
    pollfd p{fds[0], POLLIN, 0};
    if (poll(&p, 1, 100) <= 0) continue;
    char buf[256];
    const auto n = read(fds[0], buf, sizeof buf);
    if (n <= 0) break;
    line.append(buf, static_cast<std::size_t>(n));
  }
  close(fds[0]);
  const auto colon = line.rfind(':');
  check(line.find("listening") != std::string::npos && colon != std::string::npos, "server did not start: '" + line + "'");
  child.port = std::stoi(line.substr(colon + 1));
  return child;
}

int stop_child(const Child& c, int sig) {
  kill(c.pid, sig);
  int status = 0;
  waitpid(c.pid, &status, 0);
  return status;
}

std::string wait_state(const Client& api, const std::string& job_id, const std::string& state) {
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  std::string now;
  while (std::chrono::steady_clock::now() < deadline) {
    now = api.get("/jobs/" + job_id).body.value("state", "");
    if (now == state) return now;
    std::this_thread::sleep_for(5ms);
  }
  return now;
}

std::string durability() {
  TempDir dir;
  const auto data_dir = (dir.path() / "data").string();
  const auto mock = dir.write("slow-mock.json", json{{"default", "{\"mark\":\"histogram\",\"encodings\":{\"x\":\"GDP\"}}"}, {"delay_ms", 60000}}.dump());

  auto first = spawn_server(data_dir, mock);
  Client api(first.port);
  auto [dataset_id, doc_id] = harness::fixture_document(api);
  const auto nodes = "/documents/" + doc_id + "/nodes";
  auto note = api.post(nodes, {{"doc_version", 0}, {"kind", "note"}, {"text", kAnalysisQuestion}});
  check(note.status == 201, "note: " + note.raw);
  auto body = generate_body(dataset_id, doc_id, kAnalysisQuestion);
  body["source_node"] = note.body["node"]["id"];
  const auto finished = api.post("/generate", body).body["job_id"].get<std::string>();
  const auto done = api.wait_job(finished);
  check(done["state"] == "done", "pre-crash job did not finish: " + done.dump());
  body["provider"] = "mock";
  const auto running = api.post("/generate", body).body["job_id"].get<std::string>();
  const auto queued = api.post("/generate", body).body["job_id"].get<std::string>();
  check(wait_state(api, running, "awaiting_model") == "awaiting_model", "mock job never reached awaiting_model");
  check(api.get("/jobs/" + queued).body["state"] == "queued", "second mock job should wait in the queue");
  const auto doc_before = api.get("/documents/" + doc_id).raw;
  const auto dataset_before = api.get("/datasets/" + dataset_id).raw;

  stop_child(first, SIGKILL);

  auto second = spawn_server(data_dir, mock);
  Client again(second.port);
  std::string failure;
  try {
    check(again.get("/datasets/" + dataset_id).raw == dataset_before, "dataset changed across the restart");
    check(again.get("/documents/" + doc_id).raw == doc_before, "document changed across the restart");
    auto job = again.get("/jobs/" + finished).body;
    check(job["state"] == "done" && job["result"] == done["result"], "completed job result lost");
    const auto node_id = job["result"]["node_id"].get<std::string>();
    check(again.get(nodes + "/" + node_id + "/spec").body == job["result"]["spec"], "generated chart spec lost");
    check(again.get(nodes + "/" + node_id + "/render").status == 200, "generated chart does not render");
    for (const auto& id : {running, queued}) {
      auto j = again.get("/jobs/" + id).body;
      check(j["state"] == "failed", "in-flight job " + id + " is " + j["state"].dump());
      check(j["error"]["code"] == "ServerRestarted" && j["error"]["detail"]["restart_marker"] == true,
            "in-flight job " + id + " lacks the restart marker: " + j["error"].dump());
    }
    // the restarted server keeps working
    body["provider"] = "rules";
    auto after = again.wait_job(again.post("/generate", body).body["job_id"].get<std::string>());
    check(after["state"] == "done", "generation after restart failed");
  } catch (const Failed& f) {
    failure = f.why;
  }
  const int status = stop_child(second, SIGTERM);
  check(failure.empty(), failure);
  check(WIFEXITED(status) && WEXITSTATUS(status) == 0, "server did not shut down cleanly on SIGTERM");
  return "SIGKILL mid-job; dataset, document and completed job intact; 2 in-flight jobs failed with restart marker";
}

std::string revision_flow() {
  TempDir dir;
  TestServer server(harness::config_for(dir));
  auto api = server.client();
  auto [dataset_id, doc_id] = harness::fixture_document(api);
  const auto nodes = "/documents/" + doc_id + "/nodes";

  auto note = api.post(nodes, {{"doc_version", 0}, {"kind", "note"}, {"text", kAnalysisQuestion}, {"position", {{"x", 100}, {"y", 100}}}});
  check(note.status == 201, "note: " + note.raw);
  const auto note_id = note.body["node"]["id"].get<std::string>();
  auto body = generate_body(dataset_id, doc_id, kAnalysisQuestion);
  body["source_node"] = note_id;
  auto gen_job = api.wait_job(api.post("/generate", body).body["job_id"].get<std::string>());
  check(gen_job["state"] == "done", "generate: " + gen_job.dump());
  const auto root = gen_job["result"]["node_id"].get<std::string>();
  const auto root_spec = api.get(nodes + "/" + root + "/spec").raw;

  auto rev = api.post(nodes + "/" + root + "/revise", {{"instruction", "flip it"}});
  check(rev.status == 202, "revise: " + rev.raw);
  auto rev_job = api.wait_job(rev.body["job_id"].get<std::string>());
  check(rev_job["state"] == "done", "revise job: " + rev_job.dump());
  const auto leaf = rev_job["result"]["node_id"].get<std::string>();

  auto doc = api.get("/documents/" + doc_id).body;
  std::map<std::string, json> by_id;
  for (const auto& n : doc["nodes"]) by_id[n["id"].get<std::string>()] = n;
  check(by_id[root]["position"]["y"].get<double>() > by_id[note_id]["position"]["y"].get<double>() + by_id[note_id]["size"]["h"].get<double>(),
        "chart is not below its note");
  check(by_id[leaf]["position"]["x"].get<double>() > by_id[root]["position"]["x"].get<double>(), "revision is not beside its parent");

  int derived = 0;
  bool from_note = false;
  for (const auto& e : doc["edges"]) {
    if (e["kind"] == "derived-from") {
      ++derived;
      check(e["from"] == root && e["to"] == leaf, "derived-from edge goes " + e.dump());
    }
    if (e["kind"] == "generated-from-note") from_note = e["from"] == note_id && e["to"] == root;
  }
  check(from_note, "missing generated-from-note edge");
  check(derived == 1, "expected one derived-from edge");
  auto lineage = api.get(nodes + "/" + leaf + "/lineage").body["ancestors"];
  check(lineage == json::array({root}), "leaf lineage is " + lineage.dump());

  auto rs = json::parse(root_spec);
  auto ls = api.get(nodes + "/" + leaf + "/spec").body;
  check(ls["encodings"]["x"] == rs["encodings"]["y"] && ls["encodings"]["y"] == rs["encodings"]["x"], "leaf axes are not swapped");
  check(api.get(nodes + "/" + root + "/spec").raw == root_spec, "root spec bytes changed");
  return "note -> " + root + " (" + rs["encodings"]["x"]["column"].get<std::string>() + " vs " +
         rs["encodings"]["y"]["column"].get<std::string>() + ") -> " + leaf + " (axes swapped), root spec byte-unchanged";
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Criterion {
    const char* name;
    std::string (*body)();
  };
  const Criterion criteria[] = {
      {"fixture pipeline", fixture_pipeline},     {"correlation oracle", correlation_oracle},
      {"query oracle", query_oracle},             {"repair convergence", repair_convergence},
      {"canvas properties", canvas_properties},   {"concurrency", concurrency},
      {"durability", durability},                 {"note-generate-revise flow", revision_flow},
  };
  std::vector<Outcome> outcomes;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    outcomes.push_back(run(c.body));
    outcomes.back().detail += " [" + fmt(ms_since(start)) + " ms]";
  }
  const double total = ms_since(t0);
  // the whole suite shares the fixture pipeline's wall-time budget
  if (outcomes[0].pass && total >= 5000.0) outcomes[0] = {false, "suite took " + fmt(total) + " ms"};
  outcomes[0].detail += "; suite wall time " + fmt(total) + " ms";

  bool all = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    std::cout << (outcomes[i].pass ? "PASS " : "FAIL ") << criteria[i].name << ": " << outcomes[i].detail << "\n";
    all = all && outcomes[i].pass;
  }
  std::cout << std::flush;
  return all ? 0 : 1;
}
