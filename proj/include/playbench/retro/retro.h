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

// Retrospective replay of finished sessions.
//
// Each replay point fixes a prefix of the stored conversation and asks the
// same model, with the same system prompt and inference parameters, for its
// current candidate list (Akinator, Taboo) or truthfulness judgment
// (Bluffing).
//
// Akinator/Taboo point i follows model turn i and the retro prompt is sent
// as a new user message. Bluffing points follow the statement and every
// answer; the prefix already ends with a user message there, so the retro
// prompt is appended to that message to keep roles alternating.

#ifndef PLAYBENCH_RETRO_RETRO_H_
#define PLAYBENCH_RETRO_RETRO_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "playbench/game/types.h"
#include "playbench/gateway/gateway.h"

namespace playbench::retro {

inline constexpr int kMaxListLength = 16;
inline constexpr int kDefaultJudgment = 3;

struct ReplayPoint {
  std::string session_id;
  // Akinator/Taboo: 1-based round. Bluffing: 0 after the statement, then
  // the number of answered questions.
  int round = 0;
  std::vector<gateway::ChatMessage> history_prefix;
  std::string retro_prompt;

  // The request actually sent: prefix plus retro prompt.
  std::vector<gateway::ChatMessage> Messages() const;
};

std::vector<ReplayPoint> ReplayPoints(const game::Session& session,
                                      std::string_view retro_prompt);

// Messages of a session in wire order.
std::vector<gateway::ChatMessage> SessionMessages(const game::Session& session);

class RetroPrompts {
 public:
  RetroPrompts() = default;
  // Reads <dir>/akinator.txt, taboo.txt and bluffing.txt when present.
  static RetroPrompts LoadDirectory(const std::string& dir);

  void Set(game::GameKind game, std::string text);
  // Throws GameError(kInvalidConfig) when the asset is missing.
  const std::string& Get(game::GameKind game) const;

 private:
  std::map<game::GameKind, std::string> prompts_;
};

struct RankedList {
  std::vector<std::string> items;
  std::string rationale;
  // Items came from the list-line fallback rather than anchors.
  bool low_confidence = false;
  bool truncated = false;
  // Nothing could be parsed; excluded from metrics.
  bool unparseable = false;

  bool operator==(const RankedList&) const = default;
};

struct Judgment {
  int level = kDefaultJudgment;  // 1 True ... 5 False
  bool unparseable = false;

  bool operator==(const Judgment&) const = default;
};

RankedList ParseRankedList(std::string_view text, game::GameKind game);
Judgment ParseJudgment(std::string_view text);

// "True", "Possibly true", "Unknown", "Possibly false", "False".
std::string_view JudgmentPhrase(int level);
std::string FormatJudgment(int level);
std::string FormatRankedList(const std::vector<std::string>& items,
                             game::GameKind game,
                             std::string_view rationale = {});

struct RetroEntry {
  int round = 0;
  std::string raw;
  std::optional<RankedList> list;
  std::optional<Judgment> judgment;
  // The completion failed; `error` holds the reason.
  bool failed = false;
  std::string error;

  bool usable() const;
  bool operator==(const RetroEntry&) const = default;
};

struct RetroTrace {
  std::string session_id;
  game::GameKind game = game::GameKind::kAkinator;
  std::string model_ref;
  std::vector<RetroEntry> entries;

  bool complete() const;
  bool operator==(const RetroTrace&) const = default;
};

// Replays every point in order. A gateway failure stops the run and leaves
// a failed entry; passing the partial trace as `resume` reuses the entries
// that succeeded.
RetroTrace RunRetrospective(const game::Session& session,
                            gateway::ChatClient& client,
                            const gateway::ModelRef& model,
                            const RetroPrompts& prompts,
                            const RetroTrace* resume = nullptr);

}  // namespace playbench::retro

#endif  // PLAYBENCH_RETRO_RETRO_H_
