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

// Rule-enforcing state machines for Akinator, Taboo and Bluffing.
//
// A session alternates user and model turns. Round i is the pair
// (user turn i, model turn i). Every operation validates before it mutates,
// so a thrown GameError leaves the session untouched.
//
// Round accounting:
//   Akinator  every model question or guess uses one of the max_rounds.
//             A rejected guess does not end the game.
//   Taboo     every model reply uses a round. Once the model says the
//             secret it gets one more reply to guess; at the round limit
//             that reply is budget-free.
//   Bluffing  every model question uses the budget; the verdict turn is
//             budget-free. After the last answer the next model turn is the
//             verdict turn.

#ifndef PLAYBENCH_GAME_ENGINE_H_
#define PLAYBENCH_GAME_ENGINE_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "playbench/game/types.h"

namespace playbench::game {

// The user keeps the secret to themselves (Akinator).
struct WithheldSecret {};
// The user supplies the secret up front (Bluffing statement, simulations).
struct ProvidedSecret {
  std::optional<std::string> text;
  std::optional<std::string> statement;
  std::optional<bool> truthful;
};
// Taboo word drawn from the config's list with a seeded generator.
struct WordListDraw {
  std::uint64_t seed = 0;
};
using SecretSource = std::variant<WithheldSecret, ProvidedSecret, WordListDraw>;

struct SessionSetup {
  std::string session_id;
  std::string model_ref;
  std::string prompt_ref;
  std::string system_prompt;
  InferenceParams inference_params;
  std::int64_t created_at_ms = 0;
};

Session CreateSession(const GameConfig& config, const SessionSetup& setup,
                      const SecretSource& secret_source,
                      const std::set<std::string>& existing_ids = {});

struct UserTurnResult {
  bool appended = false;
  // Taboo: the input contained the secret; the session ended, model won.
  std::optional<std::string> rule_violation;
  // Akinator: the answer rejected a pending guess.
  bool rejected_guess = false;
};

UserTurnResult ApplyUserTurn(Session& session, std::string_view input);

struct TurnClassification {
  TurnKind kind = TurnKind::kOrdinary;
  std::optional<Prediction> prediction;
  bool uttered_secret = false;
  std::optional<int> question_number;
  bool numbering_anomaly = false;
  bool consumed_round = false;
  // The session now waits for outcome feedback.
  bool awaiting_feedback = false;
  // Bluffing: the next model turn must carry the verdict.
  bool verdict_required = false;
};

TurnClassification ApplyModelTurn(Session& session, std::string_view output);

// Records the user's feedback and ends the session. `revealed_secret` is
// the Akinator target on a loss, or "true"/"false" for a Bluffing session
// that ended without a verdict.
Outcome FinalizeSession(Session& session, Feedback feedback,
                        const std::optional<std::string>& revealed_secret = {});

void AbandonSession(Session& session);

// Rounds reported for outcome metrics: the Bluffing verdict turn counts,
// the Taboo post-limit guess chance does not.
int ReportedRounds(const Session& session);

// Bluffing ground truth expressed on the five-level judgment scale:
// 1 (true) or 5 (false).
std::optional<int> GroundTruthLevel(const Session& session);

}  // namespace playbench::game

#endif  // PLAYBENCH_GAME_ENGINE_H_
