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

// HTTP binding of ArenaService under /v1.
//
//   POST /v1/sessions                     start, body {"game"?, "seed"?}
//   GET  /v1/sessions/{id}                current view
//   POST /v1/sessions/{id}/messages       {"text"} or {"retry": true}
//   POST /v1/sessions/{id}/outcome        {"feedback", "revealed_secret"?}
//   GET  /v1/leaderboard?game=&family=
//   GET  /v1/health
//
// POST requests honour an Idempotency-Key header. Errors are JSON bodies
// of the form {"error": {"code", "message", "retryable"}}.

#ifndef PLAYBENCH_SERVICE_HTTP_SERVER_H_
#define PLAYBENCH_SERVICE_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "playbench/service/service.h"

namespace playbench::service {

class HttpServer {
 public:
  explicit HttpServer(ArenaService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and returns the port; 0 picks a free one. Returns -1 on failure.
  int Bind(const std::string& host, int port);
  // Serves until Stop(). Call after Bind.
  bool Serve();
  void Stop();
  // Blocks until the server accepts connections.
  void WaitUntilReady();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace playbench::service

#endif  // PLAYBENCH_SERVICE_HTTP_SERVER_H_
