// Copyright 2026 The Playbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "playbench/service/http_server.h"

#include <exception>
#include <optional>

#include "httplib.h"

namespace playbench::service {
namespace {

void Send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, const ApiError& e) {
  Send(res, e.http_status(), e.ToJson());
}

std::optional<std::string> IdempotencyKey(const httplib::Request& req) {
  if (!req.has_header("Idempotency-Key")) return std::nullopt;
  std::string key = req.get_header_value("Idempotency-Key");
  if (key.empty()) return std::nullopt;
  return key;
}

Json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded()) {
    throw ApiError(kInvalidRequest, "body is not valid JSON", false, 400);
  }
  return body;
}

std::optional<std::string> Param(const httplib::Request& req,
                                 const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

template <typename F>
httplib::Server::Handler Wrap(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ApiError& e) {
      SendError(res, e);
    } catch (const std::exception& e) {
      SendError(res, ApiError(kInternal, e.what(), false, 500));
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  ArenaService& service;
  httplib::Server server;
};

HttpServer::HttpServer(ArenaService& service)
    : impl_(new Impl{service, {}}) {
  ArenaService& svc = impl_->service;
  httplib::Server& s = impl_->server;

  s.Post("/v1/sessions", Wrap([&svc](const httplib::Request& req,
                                     httplib::Response& res) {
           Send(res, 201, svc.StartSession(ParseBody(req), IdempotencyKey(req)));
         }));
  s.Get(R"(/v1/sessions/([^/]+))",
        Wrap([&svc](const httplib::Request& req, httplib::Response& res) {
          Send(res, 200, svc.GetSession(req.matches[1]));
        }));
  s.Post(R"(/v1/sessions/([^/]+)/messages)",
         Wrap([&svc](const httplib::Request& req, httplib::Response& res) {
           Send(res, 200, svc.PostMessage(req.matches[1], ParseBody(req),
                                          IdempotencyKey(req)));
         }));
  s.Post(R"(/v1/sessions/([^/]+)/outcome)",
         Wrap([&svc](const httplib::Request& req, httplib::Response& res) {
           Send(res, 200, svc.PostOutcome(req.matches[1], ParseBody(req),
                                          IdempotencyKey(req)));
         }));
  s.Get("/v1/leaderboard",
        Wrap([&svc](const httplib::Request& req, httplib::Response& res) {
          Send(res, 200,
               svc.Leaderboard(Param(req, "game"), Param(req, "family")));
        }));
  s.Get("/v1/health",
        Wrap([&svc](const httplib::Request&, httplib::Response& res) {
          Send(res, 200, svc.Health());
        }));
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      SendError(res, ApiError(kNotFound, "no such endpoint", false, 404));
    }
  });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Serve() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::WaitUntilReady() { impl_->server.wait_until_ready(); }

}  // namespace playbench::service
