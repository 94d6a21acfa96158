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

#include "playbench/game/types.h"

#include <algorithm>
#include <string>

#include "playbench/game/text.h"

namespace playbench::game {

std::string_view GameName(GameKind game) {
  switch (game) {
    case GameKind::kAkinator: return "akinator";
    case GameKind::kTaboo: return "taboo";
    case GameKind::kBluffing: return "bluffing";
  }
  return "unknown";
}

GameKind ParseGameKind(std::string_view name) {
  std::string lower = text::ToLower(text::Trim(name));
  for (GameKind g : kAllGames) {
    if (GameName(g) == lower) return g;
  }
  throw GameError(ErrorCode::kInvalidConfig,
                  "unknown game '" + std::string(name) + "'");
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kEmptyWordList: return "empty_word_list";
    case ErrorCode::kDuplicateSessionId: return "duplicate_session_id";
    case ErrorCode::kSessionFinished: return "session_finished";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kCharLimitExceeded: return "char_limit_exceeded";
    case ErrorCode::kUnparseableAnswer: return "unparseable_answer";
    case ErrorCode::kNotUsersTurn: return "not_users_turn";
    case ErrorCode::kNotModelsTurn: return "not_models_turn";
    case ErrorCode::kAwaitingFeedback: return "awaiting_feedback";
    case ErrorCode::kPredictionPending: return "prediction_pending";
    case ErrorCode::kNoPendingPrediction: return "no_pending_prediction";
    case ErrorCode::kMissingRevealedSecret: return "missing_revealed_secret";
    case ErrorCode::kGameNotOver: return "game_not_over";
    case ErrorCode::kStatementMismatch: return "statement_mismatch";
  }
  return "unknown";
}

GameConfig GameConfig::Defaults(GameKind game,
                                std::vector<std::string> word_list) {
  GameConfig config;
  config.game = game;
  switch (game) {
    case GameKind::kAkinator:
      config.max_rounds = 20;
      break;
    case GameKind::kTaboo:
      config.max_rounds = 5;
      config.user_char_limit = 140;
      config.taboo_word_list = std::move(word_list);
      break;
    case GameKind::kBluffing:
      config.max_rounds = 5;
      config.judgment_levels = {"True", "Possibly true", "Unknown",
                                "Possibly false", "False"};
      break;
  }
  return config;
}

void GameConfig::Validate() const {
  if (max_rounds <= 0) {
    throw GameError(ErrorCode::kInvalidConfig, "max_rounds must be positive");
  }
  if (user_char_limit.has_value()) {
    if (game != GameKind::kTaboo) {
      throw GameError(ErrorCode::kInvalidConfig,
                      "user_char_limit applies to taboo only");
    }
    if (*user_char_limit <= 0) {
      throw GameError(ErrorCode::kInvalidConfig,
                      "user_char_limit must be positive");
    }
  }
  if (game == GameKind::kTaboo) {
    if (taboo_word_list.empty()) {
      throw GameError(ErrorCode::kEmptyWordList, "taboo word list is empty");
    }
    if (std::any_of(taboo_word_list.begin(), taboo_word_list.end(),
                    [](const std::string& w) { return text::IsBlank(w); })) {
      throw GameError(ErrorCode::kInvalidConfig, "blank taboo word");
    }
  } else if (!taboo_word_list.empty()) {
    throw GameError(ErrorCode::kInvalidConfig,
                    "taboo_word_list applies to taboo only");
  }
  if (game == GameKind::kBluffing && judgment_levels.size() != 5) {
    throw GameError(ErrorCode::kInvalidConfig,
                    "bluffing needs exactly five judgment levels");
  }
  if (game != GameKind::kBluffing && !judgment_levels.empty()) {
    throw GameError(ErrorCode::kInvalidConfig,
                    "judgment_levels applies to bluffing only");
  }
}

void InferenceParams::Validate() const {
  if (!(temperature >= 0.0)) {
    throw GameError(ErrorCode::kInvalidConfig, "temperature must be >= 0");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw GameError(ErrorCode::kInvalidConfig, "top_p must be in (0, 1]");
  }
  if (max_output_tokens <= 0) {
    throw GameError(ErrorCode::kInvalidConfig,
                    "max_output_tokens must be positive");
  }
}

std::string_view RoleName(Role role) {
  return role == Role::kUser ? "user" : "model";
}

std::string_view AkinatorAnswerName(AkinatorAnswer answer) {
  switch (answer) {
    case AkinatorAnswer::kYes: return "Yes";
    case AkinatorAnswer::kNo: return "No";
    case AkinatorAnswer::kProbablyYes: return "Probably Yes";
    case AkinatorAnswer::kProbablyNo: return "Probably No";
    case AkinatorAnswer::kDontKnow: return "Don't Know";
  }
  return "Don't Know";
}

Prediction Prediction::Guess(GameKind game, std::string text) {
  return Prediction{game, std::move(text)};
}

Prediction Prediction::Verdict(bool truthful) {
  return Prediction{GameKind::kBluffing, truthful};
}

std::string_view StatusName(SessionStatus status) {
  switch (status) {
    case SessionStatus::kActive: return "active";
    case SessionStatus::kModelWon: return "model_won";
    case SessionStatus::kUserWon: return "user_won";
    case SessionStatus::kAbandoned: return "abandoned";
  }
  return "active";
}

SessionStatus ParseStatus(std::string_view name) {
  for (auto s : {SessionStatus::kActive, SessionStatus::kModelWon,
                 SessionStatus::kUserWon, SessionStatus::kAbandoned}) {
    if (StatusName(s) == name) return s;
  }
  throw GameError(ErrorCode::kInvalidConfig,
                  "unknown status '" + std::string(name) + "'");
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kAwaitingUser: return "awaiting_user";
    case Phase::kAwaitingModel: return "awaiting_model";
    case Phase::kAwaitingFeedback: return "awaiting_feedback";
    case Phase::kFinished: return "finished";
  }
  return "finished";
}

Phase ParsePhase(std::string_view name) {
  for (auto p : {Phase::kAwaitingUser, Phase::kAwaitingModel,
                 Phase::kAwaitingFeedback, Phase::kFinished}) {
    if (PhaseName(p) == name) return p;
  }
  throw GameError(ErrorCode::kInvalidConfig,
                  "unknown phase '" + std::string(name) + "'");
}

std::string_view FeedbackName(Feedback feedback) {
  return feedback == Feedback::kConfirmedCorrect ? "confirmed_correct"
                                                 : "confirmed_incorrect";
}

Feedback ParseFeedback(std::string_view name) {
  if (name == "confirmed_correct") return Feedback::kConfirmedCorrect;
  if (name == "confirmed_incorrect") return Feedback::kConfirmedIncorrect;
  throw GameError(ErrorCode::kInvalidConfig,
                  "unknown feedback '" + std::string(name) + "'");
}

int Session::model_turns() const {
  return static_cast<int>(std::count_if(turns.begin(), turns.end(),
                                        [](const Turn& t) {
                                          return t.role == Role::kModel;
                                        }));
}

int Session::user_turns() const {
  return static_cast<int>(turns.size()) - model_turns();
}

}  // namespace playbench::game
