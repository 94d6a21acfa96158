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

#include "playbench/gateway/gateway.h"

#include <algorithm>
#include <chrono>
#include <thread>

#include "playbench/game/random.h"

namespace playbench::gateway {

std::string_view ApiFlavorName(ApiFlavor flavor) {
  return flavor == ApiFlavor::kMock ? "mock" : "openai_compatible";
}

ApiFlavor ParseApiFlavor(std::string_view name) {
  if (name == "mock") return ApiFlavor::kMock;
  if (name == "openai_compatible") return ApiFlavor::kOpenAiCompatible;
  throw game::GameError(game::ErrorCode::kInvalidConfig,
                        "unknown api_flavor '" + std::string(name) + "'");
}

void ModelRef::Validate() const {
  auto fail = [this](const std::string& what) {
    throw game::GameError(game::ErrorCode::kInvalidConfig,
                          "model '" + id + "': " + what);
  };
  if (id.empty()) fail("empty id");
  if (flavor == ApiFlavor::kMock) {
    if (script.empty()) fail("mock models need a script");
  } else if (endpoint.empty()) {
    fail("openai_compatible models need an endpoint");
  }
  if (requests_per_minute < 0) fail("requests_per_minute must be >= 0");
}

Pairing PairRandomly(const std::vector<game::GameKind>& games,
                     const std::vector<ModelRef>& models,
                     const std::vector<PromptRef>& prompts,
                     std::uint64_t seed) {
  std::vector<game::GameKind> selectable;
  for (game::GameKind g : games) {
    bool has_prompt = std::any_of(prompts.begin(), prompts.end(),
                                  [g](const PromptRef& p) { return p.game == g; });
    if (has_prompt) selectable.push_back(g);
  }
  if (selectable.empty() || models.empty()) {
    throw game::GameError(game::ErrorCode::kInvalidConfig,
                          "pairing needs at least one game with prompts and "
                          "one model");
  }
  rng::Engine engine(seed);
  Pairing pairing;
  pairing.game = selectable[rng::UniformIndex(engine, selectable.size())];
  pairing.model = models[rng::UniformIndex(engine, models.size())];
  std::vector<const PromptRef*> pool;
  for (const PromptRef& p : prompts) {
    if (p.game == pairing.game) pool.push_back(&p);
  }
  pairing.prompt = *pool[rng::UniformIndex(engine, pool.size())];
  return pairing;
}

std::string_view GatewayErrorKindName(GatewayError::Kind kind) {
  switch (kind) {
    case GatewayError::Kind::kInvalidRequest: return "invalid_request";
    case GatewayError::Kind::kTimeout: return "timeout";
    case GatewayError::Kind::kProvider: return "provider_error";
    case GatewayError::Kind::kTransport: return "transport_error";
    case GatewayError::Kind::kScriptExhausted: return "script_exhausted";
    case GatewayError::Kind::kUnknownModel: return "unknown_model";
  }
  return "unknown";
}

void ValidateMessages(const std::vector<ChatMessage>& messages) {
  for (std::size_t i = 0; i < messages.size(); ++i) {
    game::Role expected = i % 2 == 0 ? game::Role::kUser : game::Role::kModel;
    if (messages[i].role != expected) {
      throw GatewayError(GatewayError::Kind::kInvalidRequest,
                         "messages must alternate starting with the user "
                         "(index " + std::to_string(i) + ")");
    }
  }
}

Clock SteadyClock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

Sleeper RealSleeper() {
  return [](double seconds) {
    if (seconds > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
  };
}

TokenBucket::TokenBucket(double requests_per_minute, Clock clock,
                         Sleeper sleeper)
    : rate_per_second_(requests_per_minute / 60.0),
      capacity_(std::max(1.0, requests_per_minute / 60.0)),
      tokens_(capacity_),
      last_(clock()),
      clock_(std::move(clock)),
      sleeper_(std::move(sleeper)) {}

void TokenBucket::Acquire() {
  std::lock_guard<std::mutex> lock(mu_);
  for (;;) {
    double now = clock_();
    tokens_ = std::min(capacity_, tokens_ + (now - last_) * rate_per_second_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    sleeper_((1.0 - tokens_) / rate_per_second_);
  }
}

Gateway::Gateway(Clock clock, Sleeper sleeper)
    : clock_(std::move(clock)), sleeper_(std::move(sleeper)) {}

void Gateway::Register(const ModelRef& model,
                       std::shared_ptr<ChatClient> client) {
  model.Validate();
  Entry entry;
  entry.client = std::move(client);
  if (model.requests_per_minute > 0) {
    entry.bucket = std::make_shared<TokenBucket>(model.requests_per_minute,
                                                 clock_, sleeper_);
  }
  std::lock_guard<std::mutex> lock(mu_);
  entries_[model.id] = std::move(entry);
}

bool Gateway::Has(std::string_view model_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.find(model_id) != entries_.end();
}

std::string Gateway::Complete(const ModelRef& model,
                              std::string_view system_prompt,
                              const std::vector<ChatMessage>& messages,
                              const game::InferenceParams& params) {
  ValidateMessages(messages);
  std::shared_ptr<ChatClient> client;
  std::shared_ptr<TokenBucket> bucket;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(model.id);
    if (it == entries_.end()) {
      throw GatewayError(GatewayError::Kind::kUnknownModel,
                         "no client registered for model '" + model.id + "'");
    }
    client = it->second.client;
    bucket = it->second.bucket;
  }
  if (bucket != nullptr) bucket->Acquire();
  return client->Complete(model, system_prompt, messages, params);
}

}  // namespace playbench::gateway
