// Copyright 2026 The kk-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON-over-HTTP front end for the graders.
//
//   POST /v1/grade        WireGradeRequest -> WireGradeResponse
//   POST /v1/grade_batch  [WireGradeRequest...] (or {"requests": [...]})
//                         ?with_advantages=true adds group advantages
//   GET  /v1/metrics      request counters
//   GET  /health          {"status": "ok", "version": ...}
//
// Errors are {"code": ..., "message": ...} with status 400 for malformed
// bodies and 422 for well-formed requests whose gold side is unusable.
//
// Request handling is pure; the only shared state is a set of atomic counters.

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <httplib.h>

#include "kkforge/grader.hpp"
#include "kkforge/serialize.hpp"
#include "kkforge/version.hpp"

namespace kkforge {

struct WireGradeRequest {
  TaskKind task = TaskKind::MCQ;
  std::string completion;
  std::string gold;
  std::optional<std::vector<std::string>> names;
  bool strict_format = false;
};

struct HttpReply {
  int status = 200;
  Json body;
};

/// A request that cannot be graded; maps onto an error reply.
struct WireError {
  int status;
  std::string code;
  std::string message;

  HttpReply reply() const { return {status, Json{{"code", code}, {"message", message}}}; }
};

/// Parses and validates one request object. Returns the error instead of
/// throwing so batch handling can report the first bad element.
inline std::variant<WireGradeRequest, WireError> parse_grade_request(const Json& j) {
  auto bad = [](std::string msg) { return WireError{400, "malformed-request", std::move(msg)}; };
  if (!j.is_object()) return bad("request must be a JSON object");
  for (const char* key : {"task", "completion", "gold"}) {
    if (!j.contains(key) || !j[key].is_string()) return bad(std::string("\"") + key + "\" must be a string");
  }
  WireGradeRequest req;
  const auto task = parse_task(j["task"].get<std::string>());
  if (!task) return bad("\"task\" must be one of kk, mcq, numeric");
  req.task = *task;
  req.completion = j["completion"].get<std::string>();
  req.gold = j["gold"].get<std::string>();
  if (j.contains("strict_format")) {
    if (!j["strict_format"].is_boolean()) return bad("\"strict_format\" must be a boolean");
    req.strict_format = j["strict_format"].get<bool>();
  }
  if (j.contains("names") && !j["names"].is_null()) {
    if (!j["names"].is_array()) return bad("\"names\" must be an array of strings");
    std::vector<std::string> names;
    for (const auto& n : j["names"]) {
      if (!n.is_string()) return bad("\"names\" must be an array of strings");
      names.push_back(n.get<std::string>());
    }
    req.names = std::move(names);
  }
  if (req.task == TaskKind::KK && !req.names) {
    return WireError{422, "missing-names", "kk requests must carry \"names\""};
  }
  if (req.task != TaskKind::KK && req.names) {
    return WireError{422, "unexpected-names", "\"names\" is only accepted for kk requests"};
  }
  return req;
}

inline Json grade_result_to_json(const GradeResult& g) {
  Json j{{"reward", g.reward}, {"reason", g.reason}};
  if (g.extraction.answer_span) j["answer_span"] = *g.extraction.answer_span;
  j["via"] = std::string(via_name(g.extraction.via));
  return j;
}

/// Grades a validated request; gold-side precondition failures become 422.
inline std::variant<GradeResult, WireError> grade_wire(const WireGradeRequest& req) {
  try {
    const auto* names = req.names ? &*req.names : nullptr;
    return reward(req.task, req.completion, req.gold, names, RewardOptions{req.strict_format});
  } catch (const std::invalid_argument& e) {
    return WireError{422, "invalid-gold", e.what()};
  }
}

struct ServiceConfig {
  std::size_t max_batch = 1024;
};

class RewardService {
 public:
  explicit RewardService(ServiceConfig config = {}) : config_(config) {}

  const ServiceConfig& config() const { return config_; }

  HttpReply grade(std::string_view body) const {
    counters_.grade.fetch_add(1, std::memory_order_relaxed);
    const auto parsed = parse_body(body);
    if (!parsed) return fail(WireError{400, "malformed-body", "request body is not valid JSON"});
    auto req = parse_grade_request(*parsed);
    if (auto* err = std::get_if<WireError>(&req)) return fail(*err);
    auto graded = grade_wire(std::get<WireGradeRequest>(req));
    if (auto* err = std::get_if<WireError>(&graded)) return fail(*err);
    return {200, grade_result_to_json(std::get<GradeResult>(graded))};
  }

  HttpReply grade_batch(std::string_view body, bool with_advantages) const {
    counters_.batch.fetch_add(1, std::memory_order_relaxed);
    const auto parsed = parse_body(body);
    if (!parsed) return fail(WireError{400, "malformed-body", "request body is not valid JSON"});
    const Json* items = &*parsed;
    if (parsed->is_object() && parsed->contains("requests")) items = &(*parsed)["requests"];
    if (!items->is_array()) {
      return fail(WireError{400, "malformed-body", "batch body must be an array of requests"});
    }
    if (items->empty() || items->size() > config_.max_batch) {
      return fail(WireError{400, "invalid-batch-size",
                            "batch size must be in [1, " + std::to_string(config_.max_batch) + "], got " +
                                std::to_string(items->size())});
    }
    Json results = Json::array();
    std::vector<double> rewards;
    rewards.reserve(items->size());
    for (std::size_t i = 0; i < items->size(); ++i) {
      auto req = parse_grade_request((*items)[i]);
      if (auto* err = std::get_if<WireError>(&req)) {
        err->message = "request " + std::to_string(i) + ": " + err->message;
        return fail(*err);
      }
      auto graded = grade_wire(std::get<WireGradeRequest>(req));
      if (auto* err = std::get_if<WireError>(&graded)) {
        err->message = "request " + std::to_string(i) + ": " + err->message;
        return fail(*err);
      }
      const auto& g = std::get<GradeResult>(graded);
      rewards.push_back(g.reward);
      results.push_back(grade_result_to_json(g));
    }
    Json out{{"results", std::move(results)}};
    if (with_advantages) out["advantages"] = group_advantages(rewards);
    return {200, std::move(out)};
  }

  Json health() const { return Json{{"status", "ok"}, {"version", std::string(kVersion)}}; }

  Json metrics() const {
    return Json{{"grade_requests", counters_.grade.load(std::memory_order_relaxed)},
                {"batch_requests", counters_.batch.load(std::memory_order_relaxed)},
                {"errors", counters_.errors.load(std::memory_order_relaxed)}};
  }

  /// Registers all routes on `server`. The service must outlive it.
  void mount(httplib::Server& server) const {
    auto send = [](httplib::Response& res, const HttpReply& reply) {
      res.status = reply.status;
      res.set_content(reply.body.dump(), "application/json");
    };
    server.Post("/v1/grade", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, grade(req.body));
    });
    server.Post("/v1/grade_batch", [this, send](const httplib::Request& req, httplib::Response& res) {
      const auto flag = req.get_param_value("with_advantages");
      send(res, grade_batch(req.body, flag == "true" || flag == "1"));
    });
    server.Get("/v1/metrics", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, {200, metrics()});
    });
    server.Get("/health", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, {200, health()});
    });
  }

 private:
  struct Counters {
    std::atomic<std::uint64_t> grade{0};
    std::atomic<std::uint64_t> batch{0};
    std::atomic<std::uint64_t> errors{0};
  };

  static std::optional<Json> parse_body(std::string_view body) {
    auto j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) return std::nullopt;
    return j;
  }

  HttpReply fail(const WireError& err) const {
    counters_.errors.fetch_add(1, std::memory_order_relaxed);
    return err.reply();
  }

  ServiceConfig config_;
  mutable Counters counters_;
};

/// Owns an httplib server bound to a port, serving a RewardService.
class RewardServer {
 public:
  explicit RewardServer(ServiceConfig config = {})
      : service_(config), server_(std::make_unique<httplib::Server>()) {
    // SO_REUSEADDR only, no SO_REUSEPORT.
    server_->set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
    server_->set_tcp_nodelay(true);
    service_.mount(*server_);
  }

  /// Binds; returns false if the port is unavailable. Port 0 picks a free one.
  bool bind(const std::string& host, int port) {
    if (port == 0) {
      port_ = server_->bind_to_any_port(host);
      return port_ > 0;
    }
    if (!server_->bind_to_port(host, port)) return false;
    port_ = port;
    return true;
  }

  /// Releases a socket that was bound but never served.
  ~RewardServer() {
    if (port_ > 0 && !served_.load()) {
      std::thread drain([this] { server_->listen_after_bind(); });
      server_->wait_until_ready();
      server_->stop();
      drain.join();
    }
  }

  RewardServer(const RewardServer&) = delete;
  RewardServer& operator=(const RewardServer&) = delete;

  int port() const { return port_; }

  /// Blocks until stop() is called.
  bool serve() {
    served_.store(true);
    return server_->listen_after_bind();
  }

  void stop() { server_->stop(); }
  void wait_until_ready() const { server_->wait_until_ready(); }

  const RewardService& service() const { return service_; }

 private:
  RewardService service_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
  std::atomic<bool> served_{false};
};

}  // namespace kkforge
