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

// Client for OpenAI-compatible chat-completion endpoints.

#ifndef PLAYBENCH_GATEWAY_HTTP_CLIENT_H_
#define PLAYBENCH_GATEWAY_HTTP_CLIENT_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "playbench/gateway/gateway.h"

namespace playbench::gateway {

struct HttpRequest {
  std::string base_url;  // scheme://host[:port]
  std::string path;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  double timeout_seconds = 60.0;
};

struct HttpResponse {
  int status = 0;  // 0 when the request never got a response
  std::string body;
  std::string error;
};

using Transport = std::function<HttpResponse(const HttpRequest&)>;

// cpp-httplib backed transport; supports https.
Transport HttplibTransport();

struct RetryPolicy {
  int max_attempts = 3;
  double initial_backoff_seconds = 1.0;
  double backoff_multiplier = 2.0;
  double total_timeout_seconds = 60.0;
};

bool IsRetryableStatus(int status);

// Request body in the chat-completion wire format.
std::string BuildCompletionBody(const ModelRef& model,
                                std::string_view system_prompt,
                                const std::vector<ChatMessage>& messages,
                                const game::InferenceParams& params);

// Text of the first choice. Throws GatewayError(kProvider) on bad bodies.
std::string ParseCompletionText(const std::string& body);

// Splits "https://host:port/v1" into ("https://host:port", "/v1").
std::pair<std::string, std::string> SplitUrl(const std::string& url);

class HttpChatClient : public ChatClient {
 public:
  // `getenv` resolves the key named by ModelRef::auth_env.
  using EnvLookup = std::function<std::string(const std::string&)>;

  explicit HttpChatClient(RetryPolicy policy = {},
                          Transport transport = HttplibTransport(),
                          Sleeper sleeper = RealSleeper(),
                          Clock clock = SteadyClock(),
                          EnvLookup getenv = nullptr);

  std::string Complete(const ModelRef& model, std::string_view system_prompt,
                       const std::vector<ChatMessage>& messages,
                       const game::InferenceParams& params) override;

 private:
  RetryPolicy policy_;
  Transport transport_;
  Sleeper sleeper_;
  Clock clock_;
  EnvLookup getenv_;
};

}  // namespace playbench::gateway

#endif  // PLAYBENCH_GATEWAY_HTTP_CLIENT_H_
