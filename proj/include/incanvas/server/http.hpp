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
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "incanvas/common/error.hpp"
#include "incanvas/server/service.hpp"

namespace incanvas::server {

/// How long one SSE poll waits for a new transition before re-checking the
/// connection, and how often an idle stream sends a keep-alive comment.
inline constexpr std::chrono::milliseconds kEventPoll{200};
inline constexpr std::chrono::milliseconds kKeepAlive{10000};
inline constexpr int kHttpThreads = 64;

/// One SSE frame per job transition; `id` is the transition's sequence number.
inline std::string sse_frame(const std::string& job_id, const JobEvent& ev) {
  Json data;
  data["job_id"] = job_id;
  data["seq"] = ev.seq;
  data["state"] = std::string(to_string(ev.state));
  data["at"] = ev.at;
  return "id: " + std::to_string(ev.seq) + "\nevent: state\ndata: " + data.dump() + "\n\n";
}

/// REST routes over a Service. Errors leave as {code, message, detail} with
/// the status from http_status().
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<Service> service) : service_(std::move(service)) {
    server_.new_task_queue = [] { return new httplib::ThreadPool(kHttpThreads); };
    server_.set_payload_max_length(service_->config().max_upload_bytes);
    server_.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const nlohmann::json::exception& e) {
        send_error(res, Error(errc::kInvalidRequest, std::string("bad JSON field: ") + e.what()));
      } catch (const std::exception& e) {
        send_error(res, Error(errc::kInternalError, e.what()));
      } catch (...) {
        send_error(res, Error(errc::kInternalError, "unknown failure"));
      }
    });
    server_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, Error(errc::kNotFound, "no route for " + req.method + " " + req.path));
      } else if (res.status == 413) {
        send_error(res, Error(errc::kPayloadTooLarge, "request body exceeds the size limit"));
      } else {
        Json body = Error("HttpError", "HTTP status " + std::to_string(res.status)).to_json();
        res.set_content(body.dump(), "application/json");
      }
    });
    routes();
  }

  ~HttpServer() { stop(); }

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return port_ = server_.bind_to_any_port(host);
    return port_ = server_.bind_to_port(host, port) ? port : -1;
  }

  /// Blocks until stop().
  bool serve() { return server_.listen_after_bind(); }

  void stop() {
    if (server_.is_running()) server_.stop();
  }

  void wait_until_ready() const { server_.wait_until_ready(); }
  int port() const { return port_; }
  httplib::Server& raw() { return server_; }

 private:
  static void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, const Error& e) { send_json(res, http_status(e.code()), e.to_json()); }

  static nlohmann::json body_json(const httplib::Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    try {
      return nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(errc::kMalformedJson, "request body is not JSON", {{"position", e.byte}});
    }
  }

  static std::string param(const httplib::Request& req, const char* name) { return req.path_params.at(name); }

  void routes() {
    auto& s = server_;
    auto svc = service_;

    s.Get("/health", [svc](const httplib::Request&, httplib::Response& res) { send_json(res, 200, svc->health()); });

    // datasets: multipart field "file", or the raw CSV as the body with ?name=
    s.Post("/datasets", [svc](const httplib::Request& req, httplib::Response& res) {
      std::string name = req.has_param("name") ? req.get_param_value("name") : "";
      if (req.is_multipart_form_data()) {
        if (!req.has_file("file")) throw Error(errc::kInvalidRequest, "multipart upload needs a 'file' field");
        const auto file = req.get_file_value("file");
        if (name.empty()) name = file.filename;
        send_json(res, 201, svc->upload_dataset(file.content, name));
      } else {
        send_json(res, 201, svc->upload_dataset(req.body, name));
      }
    });
    s.Get("/datasets", [svc](const httplib::Request&, httplib::Response& res) { send_json(res, 200, svc->list_datasets()); });
    s.Get("/datasets/:id", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, svc->get_dataset(param(req, "id")));
    });
    s.Get("/datasets/:id/suggestions", [svc](const httplib::Request& req, httplib::Response& res) {
      int k = 5;
      if (req.has_param("k")) {
        try {
          k = std::stoi(req.get_param_value("k"));
        } catch (const std::exception&) {
          throw Error(errc::kInvalidRequest, "k must be an integer", {{"k", req.get_param_value("k")}});
        }
      }
      send_json(res, 200, svc->suggestions(param(req, "id"), k));
    });

    // documents and nodes
    s.Post("/documents", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 201, svc->create_document(body_json(req)));
    });
    s.Get("/documents", [svc](const httplib::Request&, httplib::Response& res) { send_json(res, 200, svc->list_documents()); });
    s.Get("/documents/:id", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, svc->get_document(param(req, "id")));
    });
    s.Post("/documents/:id/nodes", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 201, svc->add_node(param(req, "id"), body_json(req)));
    });
    s.Put("/documents/:id/nodes/:nid", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, svc->update_node(param(req, "id"), param(req, "nid"), body_json(req)));
    });
    s.Delete("/documents/:id/nodes/:nid", [svc](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json body = body_json(req);
      if (req.has_param("doc_version")) {
        try {
          body["doc_version"] = std::stoll(req.get_param_value("doc_version"));
        } catch (const std::exception&) {
          throw Error(errc::kInvalidRequest, "doc_version must be an integer", {{"field", "doc_version"}});
        }
      }
      send_json(res, 200, svc->delete_node(param(req, "id"), param(req, "nid"), detail::require_version(body)));
    });
    s.Post("/documents/:id/nodes/:nid/duplicate", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 201, svc->duplicate_node(param(req, "id"), param(req, "nid"), body_json(req)));
    });
    s.Get("/documents/:id/nodes/:nid/lineage", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, svc->lineage(param(req, "id"), param(req, "nid")));
    });
    s.Get("/documents/:id/nodes/:nid/spec", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, svc->node_spec(param(req, "id"), param(req, "nid")));
    });
    s.Get("/documents/:id/nodes/:nid/render", [svc](const httplib::Request& req, httplib::Response& res) {
      auto payload = svc->render(param(req, "id"), param(req, "nid"));
      res.status = 200;
      res.set_content(*payload, "application/json");
    });
    s.Post("/documents/:id/nodes/:nid/revise", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 202, svc->revise(param(req, "id"), param(req, "nid"), body_json(req)));
    });

    // generation jobs
    s.Post("/generate", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 202, svc->generate(body_json(req)));
    });
    s.Get("/jobs", [svc](const httplib::Request&, httplib::Response& res) { send_json(res, 200, svc->list_jobs()); });
    s.Get("/jobs/:id", [svc](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, svc->job(param(req, "id")));
    });
    // Replays the transition log from Last-Event-ID (or the start), then
    // follows live transitions and closes after the terminal one.
    s.Get("/jobs/:id/events", [svc](const httplib::Request& req, httplib::Response& res) {
      const auto id = param(req, "id");
      svc->job(id);
      auto cursor = std::make_shared<std::size_t>(0);
      if (req.has_header("Last-Event-ID")) {
        try {
          *cursor = std::stoul(req.get_header_value("Last-Event-ID")) + 1;
        } catch (const std::exception&) {
          throw Error(errc::kInvalidRequest, "Last-Event-ID must be a sequence number");
        }
      }
      auto last_write = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider("text/event-stream", [svc, id, cursor, last_write](std::size_t, httplib::DataSink& sink) {
        auto events = svc->jobs().events_from(id, *cursor, kEventPoll);
        for (const auto& ev : events) {
          const auto frame = sse_frame(id, ev);
          if (!sink.write(frame.data(), frame.size())) return false;
          *cursor = ev.seq + 1;
          *last_write = std::chrono::steady_clock::now();
          if (is_terminal(ev.state)) {
            sink.done();
            return true;
          }
        }
        if (events.empty()) {
          if (svc->jobs().stopping()) {
            sink.done();
            return true;
          }
          if (std::chrono::steady_clock::now() - *last_write >= kKeepAlive) {
            static constexpr char kPing[] = ": keep-alive\n\n";
            if (!sink.write(kPing, sizeof kPing - 1)) return false;
            *last_write = std::chrono::steady_clock::now();
          }
        }
        return true;
      });
    });
  }

  std::shared_ptr<Service> service_;
  httplib::Server server_;
  int port_ = -1;
};

}  // namespace incanvas::server
