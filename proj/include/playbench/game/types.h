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

#ifndef PLAYBENCH_GAME_TYPES_H_
#define PLAYBENCH_GAME_TYPES_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace playbench::game {

enum class GameKind { kAkinator, kTaboo, kBluffing };

inline constexpr GameKind kAllGames[] = {GameKind::kAkinator, GameKind::kTaboo,
                                         GameKind::kBluffing};

// Lowercase game name used on the wire and in file paths.
std::string_view GameName(GameKind game);
GameKind ParseGameKind(std::string_view name);

// Every rule violation or misuse of the state machine carries one of these.
// The service maps each code to exactly one API error code.
enum class ErrorCode {
  kInvalidConfig,
  kEmptyWordList,
  kDuplicateSessionId,
  kSessionFinished,
  kEmptyInput,
  kCharLimitExceeded,
  kUnparseableAnswer,
  kNotUsersTurn,
  kNotModelsTurn,
  kAwaitingFeedback,
  kPredictionPending,
  kNoPendingPrediction,
  kMissingRevealedSecret,
  kGameNotOver,
  kStatementMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

class GameError : public std::runtime_error {
 public:
  GameError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// How Taboo keyword detection compares words.
enum class KeywordMatch {
  kExact,       // whole word, case-insensitive
  kPluralFold,  // whole word plus trailing "s"/"es" variants
  kSubstring,   // case-insensitive substring anywhere
};

struct GameConfig {
  GameKind game = GameKind::kAkinator;
  int max_rounds = 20;
  std::optional<int> user_char_limit;
  std::vector<std::string> taboo_word_list;
  std::vector<std::string> judgment_levels;
  KeywordMatch keyword_match = KeywordMatch::kPluralFold;

  // Defaults: Akinator 20 questions, Taboo 5 rounds with a 140 character
  // limit, Bluffing 5 questions with the five-level judgment scale.
  static GameConfig Defaults(GameKind game,
                             std::vector<std::string> word_list = {});

  // Throws GameError(kInvalidConfig / kEmptyWordList).
  void Validate() const;
  bool operator==(const GameConfig&) const = default;
};

struct InferenceParams {
  double temperature = 0.7;
  double top_p = 1.0;
  int max_output_tokens = 1024;
  std::optional<std::int64_t> seed;

  void Validate() const;
  bool operator==(const InferenceParams&) const = default;
};

enum class Role { kUser, kModel };
std::string_view RoleName(Role role);

enum class TurnKind { kOrdinary, kPrediction };

enum class AkinatorAnswer { kYes, kNo, kProbablyYes, kProbablyNo, kDontKnow };
std::string_view AkinatorAnswerName(AkinatorAnswer answer);

// A secret guess. Akinator and Taboo carry text, Bluffing a verdict.
struct Prediction {
  GameKind game = GameKind::kAkinator;
  std::variant<std::string, bool> payload;

  static Prediction Guess(GameKind game, std::string text);
  static Prediction Verdict(bool truthful);

  const std::string& text() const { return std::get<std::string>(payload); }
  bool verdict() const { return std::get<bool>(payload); }
  bool is_verdict() const { return std::holds_alternative<bool>(payload); }

  bool operator==(const Prediction&) const = default;
};

struct Turn {
  int index = 0;  // 1-based round
  Role role = Role::kUser;
  std::string content;
  TurnKind kind = TurnKind::kOrdinary;
  std::optional<Prediction> prediction;
  std::optional<AkinatorAnswer> answer;
  // "Question N:" header, when the model emitted one.
  std::optional<int> question_number;
  bool numbering_anomaly = false;
  // Taboo: the model output contains the secret word.
  bool uttered_secret = false;

  bool operator==(const Turn&) const = default;
};

enum class SessionStatus { kActive, kModelWon, kUserWon, kAbandoned };
std::string_view StatusName(SessionStatus status);
SessionStatus ParseStatus(std::string_view name);

enum class Phase { kAwaitingUser, kAwaitingModel, kAwaitingFeedback, kFinished };
std::string_view PhaseName(Phase phase);
Phase ParsePhase(std::string_view name);

enum class Feedback { kConfirmedCorrect, kConfirmedIncorrect };
std::string_view FeedbackName(Feedback feedback);
Feedback ParseFeedback(std::string_view name);

enum class Winner { kModel, kUser };

struct Outcome {
  Winner winner = Winner::kUser;
  int win_indicator = 0;
  int rounds = 0;
  std::optional<std::string> revealed_secret;
  // Absent when the game ended by rule (Taboo user violation).
  std::optional<Feedback> user_feedback;
  std::optional<std::string> rule_violation;

  bool operator==(const Outcome&) const = default;
};

// The hidden target g. Akinator: object text (known once confirmed or
// revealed). Taboo: the assigned word. Bluffing: statement and truthfulness.
struct Secret {
  std::optional<std::string> text;
  std::optional<std::string> statement;
  std::optional<bool> truthful;

  bool operator==(const Secret&) const = default;
};

struct Session {
  std::string session_id;
  GameConfig config;
  std::string model_ref;
  std::string prompt_ref;
  std::string system_prompt;
  InferenceParams inference_params;
  Secret secret;
  std::vector<Turn> turns;
  SessionStatus status = SessionStatus::kActive;
  int round_count = 0;
  std::int64_t created_at_ms = 0;

  Phase phase = Phase::kAwaitingUser;
  std::optional<Prediction> pending_prediction;
  // Taboo: round in which the model first said the secret word.
  std::optional<int> uttered_round;
  // Taboo: winner already decided by the keyword rules, awaiting feedback.
  std::optional<Winner> rule_winner;
  std::optional<Outcome> outcome;

  GameKind game() const { return config.game; }
  bool finished() const { return status != SessionStatus::kActive; }
  int model_turns() const;
  int user_turns() const;

  bool operator==(const Session&) const = default;
};

}  // namespace playbench::game

#endif  // PLAYBENCH_GAME_TYPES_H_
