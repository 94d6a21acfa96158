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

// Model and prompt registry types, random pairing, and the chat-completion
// client interface shared by the HTTP client and the mock models.

#ifndef PLAYBENCH_GATEWAY_GATEWAY_H_
#define PLAYBENCH_GATEWAY_GATEWAY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "playbench/game/types.h"

namespace playbench::gateway {

enum class ApiFlavor { kOpenAiCompatible, kMock };

std::string_view ApiFlavorName(ApiFlavor flavor);
ApiFlavor ParseApiFlavor(std::string_view name);

struct ModelRef {
  std::string id;
  ApiFlavor flavor = ApiFlavor::kMock;
  // openai_compatible: base URL, e.g. https://host/v1.
  std::string endpoint;
  // Name of the environment variable holding the API key.
  std::string auth_env;
  // Model name sent on the wire; the id is used when empty.
  std::string remote_model;
  // mock: path of a script file, or "sim:<persona>" for the simulator.
  std::string script;
  // 0 disables rate limiting.
  double requests_per_minute = 0.0;

  void Validate() const;
  bool operator==(const ModelRef&) const = default;
};

struct PromptRef {
  std::string id;
  game::GameKind game = game::GameKind::kAkinator;
  std::string body;

  bool operator==(const PromptRef&) const = default;
};

struct Pairing {
  game::GameKind game = game::GameKind::kAkinator;
  ModelRef model;
  PromptRef prompt;
};

// Uniform game, then uniform model, then uniform prompt among those
// registered for the chosen game. Games without prompts are not selectable.
Pairing PairRandomly(const std::vector<game::GameKind>& games,
                     const std::vector<ModelRef>& models,
                     const std::vector<PromptRef>& prompts,
                     std::uint64_t seed);

struct ChatMessage {
  game::Role role = game::Role::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// First line of the retrospective prompts; mock models use it to tell a
// replay request from a game move.
inline constexpr std::string_view kRetroMarker =
    "Given the previous game history";

class GatewayError : public std::runtime_error {
 public:
  enum class Kind {
    kInvalidRequest,
    kTimeout,
    kProvider,
    kTransport,
    kScriptExhausted,
    kUnknownModel,
  };

  GatewayError(Kind kind, const std::string& message, int status = 0)
      : std::runtime_error(message), kind_(kind), status_(status) {}

  Kind kind() const { return kind_; }
  // HTTP status reported by the provider, 0 if none.
  int status() const { return status_; }

 private:
  Kind kind_;
  int status_;
};

std::string_view GatewayErrorKindName(GatewayError::Kind kind);

class ChatClient {
 public:
  virtual ~ChatClient() = default;

  // Returns the assistant reply. Must not retain references to arguments.
  virtual std::string Complete(const ModelRef& model,
                               std::string_view system_prompt,
                               const std::vector<ChatMessage>& messages,
                               const game::InferenceParams& params) = 0;
};

// Throws GatewayError(kInvalidRequest) unless messages start with a user
// turn and alternate.
void ValidateMessages(const std::vector<ChatMessage>& messages);

using Clock = std::function<double()>;  // seconds, monotonic
using Sleeper = std::function<void(double seconds)>;

Clock SteadyClock();
Sleeper RealSleeper();

class TokenBucket {
 public:
  TokenBucket(double requests_per_minute, Clock clock, Sleeper sleeper);

  // Blocks until a token is available.
  void Acquire();

 private:
  double rate_per_second_;
  double capacity_;
  double tokens_;
  double last_;
  Clock clock_;
  Sleeper sleeper_;
  std::mutex mu_;
};

// Routes requests to per-model clients and applies per-model rate limits.
class Gateway : public ChatClient {
 public:
  explicit Gateway(Clock clock = SteadyClock(),
                   Sleeper sleeper = RealSleeper());

  void Register(const ModelRef& model, std::shared_ptr<ChatClient> client);
  bool Has(std::string_view model_id) const;

  std::string Complete(const ModelRef& model, std::string_view system_prompt,
                       const std::vector<ChatMessage>& messages,
                       const game::InferenceParams& params) override;

 private:
  struct Entry {
    std::shared_ptr<ChatClient> client;
    std::shared_ptr<TokenBucket> bucket;
  };

  Clock clock_;
  Sleeper sleeper_;
  mutable std::mutex mu_;
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace playbench::gateway

#endif  // PLAYBENCH_GATEWAY_GATEWAY_H_
