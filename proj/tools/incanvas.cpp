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

// incanvas: canvas server and offline pipeline commands.
//
//   incanvas serve [--listen host:port] [--data-dir DIR] [--provider NAME] [--max-jobs N]
//   incanvas summarize data.csv
//   incanvas suggest data.csv [-k N]
//   incanvas generate data.csv "goal text" [--provider NAME] [--mock-fixture FILE]
//
// serve reads INCANVAS_* environment variables first; flags override them.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "incanvas/incanvas.hpp"

namespace {

using incanvas::Error;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(incanvas::errc::kNotFound, "cannot open '" + path + "'", {{"path", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

incanvas::data::Dataset load_csv(const std::string& path) {
  auto name = path.substr(path.find_last_of('/') + 1);
  return incanvas::data::ingest_csv(read_file(path), name);
}

int serve(incanvas::server::ServerConfig config) {
  // Signals go to a dedicated thread; block them before any other thread exists.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto service = std::make_shared<incanvas::server::Service>(config);
  incanvas::server::HttpServer http(service);
  const int port = http.bind(config.host, config.port);
  if (port < 0) {
    std::cerr << "cannot bind " << config.host << ":" << config.port << "\n";
    return 1;
  }
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    http.stop();
  });
  waiter.detach();
  std::cout << "incanvas listening on http://" << config.host << ":" << port << std::endl;
  http.serve();
  service->shutdown();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incanvas: natural-language charts on a freeform canvas"};
  app.require_subcommand(1);

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP server");
  std::string listen, data_dir, provider, mock_fixture;
  int max_jobs = 0;
  serve_cmd->add_option("--listen", listen, "host:port (port 0 picks a free port)");
  serve_cmd->add_option("--data-dir", data_dir, "persistence directory");
  serve_cmd->add_option("--provider", provider, "default model provider: rules, mock or http");
  serve_cmd->add_option("--max-jobs", max_jobs, "concurrent generation jobs")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--mock-fixture", mock_fixture, "JSON fixture for the mock provider");

  auto* summarize_cmd = app.add_subcommand("summarize", "print the dataset summary of a CSV file");
  std::string csv_path;
  summarize_cmd->add_option("csv", csv_path)->required();

  auto* suggest_cmd = app.add_subcommand("suggest", "print prompt suggestions for a CSV file");
  int k = 5;
  suggest_cmd->add_option("csv", csv_path)->required();
  suggest_cmd->add_option("-k", k, "number of suggestions");

  auto* generate_cmd = app.add_subcommand("generate", "generate a chart for a goal and print the result");
  std::string goal;
  std::string gen_provider = "rules";
  generate_cmd->add_option("csv", csv_path)->required();
  generate_cmd->add_option("goal", goal)->required();
  generate_cmd->add_option("--provider", gen_provider, "rules or mock");
  generate_cmd->add_option("--mock-fixture", mock_fixture, "JSON fixture for the mock provider");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) {
      auto config = incanvas::server::ServerConfig::from_env();
      if (!listen.empty()) config.set_listen(listen);
      if (!data_dir.empty()) config.data_dir = data_dir;
      if (!provider.empty()) config.provider = provider;
      if (max_jobs > 0) config.max_jobs = max_jobs;
      if (!mock_fixture.empty()) config.mock_fixture = mock_fixture;
      return serve(std::move(config));
    }
    if (*summarize_cmd) {
      std::cout << incanvas::data::summarize_dataset(load_csv(csv_path)).to_json().dump(2) << "\n";
      return 0;
    }
    if (*suggest_cmd) {
      nlohmann::ordered_json out = incanvas::gen::suggest_prompts(load_csv(csv_path), k);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*generate_cmd) {
      auto registry = std::make_shared<incanvas::gen::ProviderRegistry>();
      registry->add(std::make_shared<incanvas::gen::RulesProvider>());
      if (!mock_fixture.empty()) registry->add(incanvas::gen::MockProvider::from_file(mock_fixture));
      incanvas::gen::Generator generator(registry);
      auto ds = std::make_shared<const incanvas::data::Dataset>(load_csv(csv_path));
      incanvas::gen::GenerationRequest req;
      req.dataset_id = ds->id;
      req.goal_text = goal;
      req.provider = gen_provider;
      std::cout << generator.generate(req, ds).to_json().dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.to_json().dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
