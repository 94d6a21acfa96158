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

#include "playbench/gateway/http_client.h"

#include <algorithm>
#include <cstdlib>

#include <spdlog/spdlog.h>

#include "json.hpp"

namespace playbench::gateway {

using nlohmann::json;

bool IsRetryableStatus(int status) {
  return status == 0 || status == 408 || status == 409 || status == 429 ||
         status >= 500;
}

std::string BuildCompletionBody(const ModelRef& model,
                                std::string_view system_prompt,
                                const std::vector<ChatMessage>& messages,
                                const game::InferenceParams& params) {
  json body;
  body["model"] = model.remote_model.empty() ? model.id : model.remote_model;
  json wire = json::array();
  wire.push_back({{"role", "system"}, {"content", std::string(system_prompt)}});
  for (const ChatMessage& m : messages) {
    wire.push_back({{"role", m.role == game::Role::kUser ? "user" : "assistant"},
                    {"content", m.content}});
  }
  body["messages"] = std::move(wire);
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  body["max_tokens"] = params.max_output_tokens;
  if (params.seed.has_value()) body["seed"] = *params.seed;
  return body.dump();
}

std::string ParseCompletionText(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) {
    throw GatewayError(GatewayError::Kind::kProvider,
                       "provider returned a non-JSON body");
  }
  const json* content = nullptr;
  if (parsed.contains("choices") && parsed["choices"].is_array() &&
      !parsed["choices"].empty()) {
    const json& choice = parsed["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content")) {
      content = &choice["message"]["content"];
    }
  }
  if (content == nullptr || !content->is_string()) {
    throw GatewayError(GatewayError::Kind::kProvider,
                       "provider response has no choices[0].message.content");
  }
  return content->get<std::string>();
}

std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  std::size_t scheme = url.find("://");
  std::size_t start = scheme == std::string::npos ? 0 : scheme + 3;
  std::size_t slash = url.find('/', start);
  if (slash == std::string::npos) return {url, ""};
  std::string path = url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, slash), path};
}

HttpChatClient::HttpChatClient(RetryPolicy policy, Transport transport,
                               Sleeper sleeper, Clock clock, EnvLookup getenv)
    : policy_(policy),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      clock_(std::move(clock)),
      getenv_(std::move(getenv)) {
  if (!getenv_) {
    getenv_ = [](const std::string& name) {
      const char* value = std::getenv(name.c_str());
      return value == nullptr ? std::string() : std::string(value);
    };
  }
}

std::string HttpChatClient::Complete(const ModelRef& model,
                                     std::string_view system_prompt,
                                     const std::vector<ChatMessage>& messages,
                                     const game::InferenceParams& params) {
  ValidateMessages(messages);
  auto [base, path] = SplitUrl(model.endpoint);
  HttpRequest request;
  request.base_url = base;
  request.path = path + "/chat/completions";
  request.headers.emplace_back("Content-Type", "application/json");
  if (!model.auth_env.empty()) {
    std::string key = getenv_(model.auth_env);
    if (key.empty()) {
      throw GatewayError(GatewayError::Kind::kInvalidRequest,
                         "environment variable " + model.auth_env +
                             " is not set for model " + model.id);
    }
    request.headers.emplace_back("Authorization", "Bearer " + key);
  }
  request.body = BuildCompletionBody(model, system_prompt, messages, params);

  const double start = clock_();
  double backoff = policy_.initial_backoff_seconds;
  HttpResponse last;
  for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
    double remaining = policy_.total_timeout_seconds - (clock_() - start);
    if (remaining <= 0) break;
    request.timeout_seconds = remaining;
    last = transport_(request);
    if (last.status >= 200 && last.status < 300) {
      return ParseCompletionText(last.body);
    }
    if (!IsRetryableStatus(last.status)) {
      throw GatewayError(GatewayError::Kind::kProvider,
                         "model " + model.id + " returned HTTP " +
                             std::to_string(last.status),
                         last.status);
    }
    spdlog::warn("model {} attempt {}/{} failed (status {})", model.id,
                 attempt, policy_.max_attempts, last.status);
    if (attempt == policy_.max_attempts) break;
    double elapsed = clock_() - start;
    if (elapsed + backoff >= policy_.total_timeout_seconds) {
      throw GatewayError(GatewayError::Kind::kTimeout,
                         "model " + model.id + " timed out after " +
                             std::to_string(attempt) + " attempts");
    }
    sleeper_(backoff);
    backoff *= policy_.backoff_multiplier;
  }
  if (clock_() - start >= policy_.total_timeout_seconds) {
    throw GatewayError(GatewayError::Kind::kTimeout,
                       "model " + model.id + " timed out");
  }
  if (last.status == 0) {
    throw GatewayError(GatewayError::Kind::kTransport,
                       "model " + model.id + " unreachable: " + last.error);
  }
  throw GatewayError(GatewayError::Kind::kProvider,
                     "model " + model.id + " failed with HTTP " +
                         std::to_string(last.status),
                     last.status);
}

}  // namespace playbench::gateway
