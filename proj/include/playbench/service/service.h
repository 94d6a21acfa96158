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

// Session lifecycle behind the /v1 endpoints, independent of the HTTP layer.
//
// Active sessions live in memory and are written to the store once they end
// (finished, rule violation or expiry). Operations on one session are
// serialized; different sessions proceed in parallel. Requests that carry
// an idempotency key replay the first successful response.

#ifndef PLAYBENCH_SERVICE_SERVICE_H_
#define PLAYBENCH_SERVICE_SERVICE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "playbench/game/engine.h"
#include "playbench/gateway/gateway.h"
#include "playbench/sim/config.h"
#include "playbench/store/store.h"

namespace playbench::service {

using Json = nlohmann::json;

class ApiError : public std::runtime_error {
 public:
  ApiError(std::string code, const std::string& message, bool retryable,
           int http_status)
      : std::runtime_error(message),
        code_(std::move(code)),
        retryable_(retryable),
        http_status_(http_status) {}

  const std::string& code() const { return code_; }
  bool retryable() const { return retryable_; }
  int http_status() const { return http_status_; }
  // {"error": {"code", "message", "retryable"}}
  Json ToJson() const;

 private:
  std::string code_;
  bool retryable_;
  int http_status_;
};

// One API error per game-core error code.
ApiError FromGameError(const game::GameError& e);
int HttpStatusFor(game::ErrorCode code);

// Codes raised by the service itself.
inline constexpr char kNotFound[] = "not_found";
inline constexpr char kInvalidRequest[] = "invalid_request";
inline constexpr char kNoModels[] = "no_models";
inline constexpr char kModelUnavailable[] = "model_unavailable";
inline constexpr char kNoData[] = "no_data";
inline constexpr char kInternal[] = "internal";

using NowMs = std::function<std::int64_t()>;
NowMs SystemNowMs();

struct ServiceOptions {
  bool blind_play = true;
  double expiry_hours = 24.0;
  // Seeds session ids, pairing and word draws; random when absent.
  std::optional<std::uint64_t> seed;
  int max_concurrent_model_calls = 8;
};

// Opening user message sent on the human's behalf when an Akinator
// session starts, so the model can ask its first question.
inline constexpr char kAkinatorOpening[] =
    "I have an object in mind. Please start asking your questions.";

class ArenaService {
 public:
  ArenaService(const sim::Platform& platform,
               std::shared_ptr<gateway::ChatClient> client,
               store::SessionStore& store, ServiceOptions options = {},
               NowMs now = SystemNowMs());

  // Every call throws ApiError on failure.
  // body: {"game"?: name, "seed"?: int, "truthful"?: bool (Bluffing)}
  Json StartSession(const Json& body,
                    const std::optional<std::string>& idempotency_key = {});
  Json GetSession(const std::string& session_id);
  // body: {"text": ...} or {"retry": true} after a model failure.
  Json PostMessage(const std::string& session_id, const Json& body,
                   const std::optional<std::string>& idempotency_key = {});
  // body: {"feedback": "confirmed_correct"|"confirmed_incorrect",
  //        "revealed_secret"?: text}
  Json PostOutcome(const std::string& session_id, const Json& body,
                   const std::optional<std::string>& idempotency_key = {});
  // game: name or empty; family: "outcome", "retro" or empty.
  Json Leaderboard(const std::optional<std::string>& game,
                   const std::optional<std::string>& family);
  Json Health();

  // Abandons and stores sessions idle longer than the expiry. Returns how
  // many were expired.
  int ExpireStale();

  // View of a session as served to the client.
  Json View(const game::Session& session) const;

 private:
  struct Live {
    std::mutex mu;
    game::Session session;
    std::int64_t last_activity_ms = 0;
    bool persisted = false;
    // The last model call failed; the next message may retry it.
    bool model_failed = false;
    std::map<std::string, Json> replies;  // idempotency key -> response
  };

  std::shared_ptr<Live> Find(const std::string& session_id);
  void Persist(Live& live);
  void CallModel(Live& live);
  void Touch(Live& live);

  const sim::Platform& platform_;
  std::shared_ptr<gateway::ChatClient> client_;
  store::SessionStore& store_;
  ServiceOptions options_;
  NowMs now_;
  std::counting_semaphore<1024> model_slots_;

  std::mutex mu_;
  std::mt19937_64 rng_;
  std::map<std::string, std::shared_ptr<Live>> live_;
  std::mutex start_mu_;
  std::map<std::string, Json> start_replies_;
};

}  // namespace playbench::service

#endif  // PLAYBENCH_SERVICE_SERVICE_H_
