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

// Recorded transcripts replayed through the engine with a scripted model.

#ifndef PLAYBENCH_SIM_FIXTURE_H_
#define PLAYBENCH_SIM_FIXTURE_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "playbench/gateway/mock.h"
#include "playbench/retro/retro.h"
#include "playbench/sim/config.h"
#include "playbench/sim/runner.h"

namespace playbench::sim {

struct TranscriptFixture {
  std::string name;
  game::GameKind game = game::GameKind::kAkinator;
  std::string model;
  std::string prompt;
  // Taboo word; Akinator and Bluffing leave it empty.
  std::optional<std::string> secret;
  std::vector<std::string> aliases;
  std::vector<gateway::ChatMessage> turns;
  // Bluffing: the verdict reply that follows the last answer.
  std::optional<std::string> verdict_turn;
  game::Feedback feedback = game::Feedback::kConfirmedCorrect;
  // Retrospective replies in replay order.
  std::vector<std::string> retro_replies;
  nlohmann::json expected;

  static TranscriptFixture FromJsonText(const std::string& text);
  static TranscriptFixture FromFile(const std::string& path);

  // Scripted model conversation reproducing the recorded replies.
  gateway::ScriptedConversation Conversation() const;
};

struct FixtureReplay {
  SimResult result;
  retro::RetroTrace trace;
};

// Drives the recorded user messages through the engine against the
// recorded model replies, then runs the retrospective.
FixtureReplay ReplayFixture(const TranscriptFixture& fixture,
                            const Platform& platform,
                            const std::string& session_id);

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_FIXTURE_H_
