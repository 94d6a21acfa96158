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

#include "playbench/game/engine.h"

#include <algorithm>
#include <string>

#include "playbench/game/random.h"
#include "playbench/game/rules.h"
#include "playbench/game/text.h"

namespace playbench::game {
namespace {

void RequireActive(const Session& session) {
  if (session.finished()) {
    throw GameError(ErrorCode::kSessionFinished,
                    "session " + session.session_id + " is already " +
                        std::string(StatusName(session.status)));
  }
}

std::optional<int> LastQuestionHeader(const Session& session) {
  for (auto it = session.turns.rbegin(); it != session.turns.rend(); ++it) {
    if (it->role == Role::kModel && it->question_number.has_value()) {
      return it->question_number;
    }
  }
  return std::nullopt;
}

Secret ResolveSecret(const GameConfig& config, const SecretSource& source) {
  Secret secret;
  switch (config.game) {
    case GameKind::kAkinator:
      if (std::holds_alternative<WordListDraw>(source)) {
        throw GameError(ErrorCode::kInvalidConfig,
                        "akinator secrets are held by the user");
      }
      if (const auto* p = std::get_if<ProvidedSecret>(&source)) {
        secret.text = p->text;
      }
      break;
    case GameKind::kTaboo:
      if (const auto* draw = std::get_if<WordListDraw>(&source)) {
        rng::Engine engine(draw->seed);
        const auto& words = config.taboo_word_list;
        secret.text = words[rng::UniformIndex(engine, words.size())];
      } else if (const auto* p = std::get_if<ProvidedSecret>(&source);
                 p != nullptr && p->text.has_value()) {
        const auto& words = config.taboo_word_list;
        if (std::find(words.begin(), words.end(), *p->text) == words.end()) {
          throw GameError(ErrorCode::kInvalidConfig,
                          "taboo secret must come from the word list");
        }
        secret.text = p->text;
      } else {
        throw GameError(ErrorCode::kInvalidConfig,
                        "taboo needs a word from the word list");
      }
      break;
    case GameKind::kBluffing:
      if (std::holds_alternative<WordListDraw>(source)) {
        throw GameError(ErrorCode::kInvalidConfig,
                        "bluffing statements come from the user");
      }
      if (const auto* p = std::get_if<ProvidedSecret>(&source)) {
        if (p->statement.has_value() && text::IsBlank(*p->statement)) {
          throw GameError(ErrorCode::kEmptyInput, "empty statement");
        }
        secret.statement = p->statement;
        secret.truthful = p->truthful;
      }
      break;
  }
  return secret;
}

void EndSession(Session& session, Outcome outcome) {
  session.status = outcome.winner == Winner::kModel ? SessionStatus::kModelWon
                                                    : SessionStatus::kUserWon;
  session.phase = Phase::kFinished;
  session.pending_prediction.reset();
  session.outcome = std::move(outcome);
}

Outcome MakeOutcome(const Session& session, Winner winner) {
  Outcome outcome;
  outcome.winner = winner;
  outcome.win_indicator = winner == Winner::kModel ? 1 : 0;
  outcome.rounds = ReportedRounds(session);
  return outcome;
}

}  // namespace

Session CreateSession(const GameConfig& config, const SessionSetup& setup,
                      const SecretSource& secret_source,
                      const std::set<std::string>& existing_ids) {
  config.Validate();
  setup.inference_params.Validate();
  if (text::IsBlank(setup.session_id)) {
    throw GameError(ErrorCode::kInvalidConfig, "session_id is empty");
  }
  if (existing_ids.contains(setup.session_id)) {
    throw GameError(ErrorCode::kDuplicateSessionId,
                    "session_id " + setup.session_id + " already exists");
  }
  Session session;
  session.session_id = setup.session_id;
  session.config = config;
  session.model_ref = setup.model_ref;
  session.prompt_ref = setup.prompt_ref;
  session.system_prompt = setup.system_prompt;
  session.inference_params = setup.inference_params;
  session.created_at_ms = setup.created_at_ms;
  session.secret = ResolveSecret(config, secret_source);
  return session;
}

UserTurnResult ApplyUserTurn(Session& session, std::string_view input) {
  RequireActive(session);
  if (session.phase == Phase::kAwaitingFeedback) {
    throw GameError(ErrorCode::kAwaitingFeedback,
                    "the game is over; submit outcome feedback");
  }
  if (session.phase != Phase::kAwaitingUser) {
    throw GameError(ErrorCode::kNotUsersTurn, "waiting for the model");
  }
  if (text::IsBlank(input)) {
    throw GameError(ErrorCode::kEmptyInput, "message is empty");
  }

  UserTurnResult result;
  Turn turn;
  turn.index = session.user_turns() + 1;
  turn.role = Role::kUser;
  turn.content = std::string(input);
  Phase next = Phase::kAwaitingModel;
  bool clear_pending = false;

  switch (session.game()) {
    case GameKind::kAkinator: {
      if (session.turns.empty()) break;  // opening message is free text
      auto answer = ParseAkinatorAnswer(input);
      if (!answer.has_value()) {
        throw GameError(ErrorCode::kUnparseableAnswer,
                        "answer must be one of: " +
                            std::string(AcceptedAnswersText()));
      }
      if (session.pending_prediction.has_value()) {
        if (*answer == AkinatorAnswer::kYes ||
            *answer == AkinatorAnswer::kProbablyYes) {
          throw GameError(ErrorCode::kPredictionPending,
                          "confirm a correct guess through outcome feedback");
        }
        clear_pending = true;
        result.rejected_guess = true;
      }
      turn.answer = answer;
      if (session.round_count >= session.config.max_rounds) {
        next = Phase::kAwaitingFeedback;
      }
      break;
    }
    case GameKind::kTaboo: {
      const int limit = session.config.user_char_limit.value_or(140);
      const std::size_t length = text::Utf8Length(input);
      if (length > static_cast<std::size_t>(limit)) {
        throw GameError(ErrorCode::kCharLimitExceeded,
                        "message has " + std::to_string(length) +
                            " characters; the limit is " +
                            std::to_string(limit));
      }
      if (DetectKeyword(input, *session.secret.text,
                        session.config.keyword_match)) {
        result.rule_violation = "user message contains the secret word";
        Outcome outcome = MakeOutcome(session, Winner::kModel);
        outcome.rule_violation = result.rule_violation;
        EndSession(session, std::move(outcome));
        return result;
      }
      break;
    }
    case GameKind::kBluffing: {
      if (session.turns.empty()) {
        std::string statement(text::Trim(input));
        if (session.secret.statement.has_value() &&
            *session.secret.statement != statement) {
          throw GameError(ErrorCode::kStatementMismatch,
                          "first message must be the registered statement");
        }
        session.secret.statement = std::move(statement);
      }
      break;
    }
  }

  if (clear_pending) session.pending_prediction.reset();
  session.turns.push_back(std::move(turn));
  session.phase = next;
  result.appended = true;
  return result;
}

TurnClassification ApplyModelTurn(Session& session, std::string_view output) {
  RequireActive(session);
  if (session.phase == Phase::kAwaitingFeedback) {
    throw GameError(ErrorCode::kAwaitingFeedback,
                    "the game is over; submit outcome feedback");
  }
  if (session.phase != Phase::kAwaitingModel) {
    throw GameError(ErrorCode::kNotModelsTurn, "waiting for the user");
  }
  if (output.empty()) {
    throw GameError(ErrorCode::kEmptyInput, "model output is empty");
  }

  TurnClassification c;
  const GameConfig& config = session.config;
  const bool blank = text::IsBlank(output);
  if (!blank) {
    c.prediction = ParseGuess(output, session.game());
    c.question_number = ParseQuestionHeader(output);
  }
  if (c.question_number.has_value()) {
    auto previous = LastQuestionHeader(session);
    c.numbering_anomaly =
        previous.has_value() && *c.question_number <= *previous;
  }
  c.kind = c.prediction ? TurnKind::kPrediction : TurnKind::kOrdinary;

  int rounds = session.round_count;
  Phase next = Phase::kAwaitingUser;
  std::optional<Winner> rule_winner;
  std::optional<int> uttered_round = session.uttered_round;
  const int index = session.model_turns() + 1;

  switch (session.game()) {
    case GameKind::kAkinator:
      ++rounds;
      c.consumed_round = true;
      if (c.prediction && rounds >= config.max_rounds) {
        next = Phase::kAwaitingFeedback;
      }
      break;
    case GameKind::kTaboo: {
      const bool guess_chance = session.uttered_round.has_value();
      if (rounds < config.max_rounds) {
        ++rounds;
        c.consumed_round = true;
      }
      c.uttered_secret = !blank && DetectKeyword(output, *session.secret.text,
                                                 config.keyword_match);
      if (c.uttered_secret && !uttered_round) uttered_round = index;
      if (c.prediction) {
        rule_winner = TabooGuessMatches(c.prediction->text(),
                                        *session.secret.text)
                          ? Winner::kModel
                          : Winner::kUser;
        next = Phase::kAwaitingFeedback;
      } else if (guess_chance) {
        rule_winner = Winner::kUser;
        next = Phase::kAwaitingFeedback;
      } else if (c.uttered_secret) {
        next = Phase::kAwaitingUser;
      } else if (rounds >= config.max_rounds) {
        rule_winner = Winner::kModel;
        next = Phase::kAwaitingFeedback;
      }
      break;
    }
    case GameKind::kBluffing: {
      const bool verdict_turn = rounds >= config.max_rounds;
      if (c.prediction || verdict_turn) {
        next = Phase::kAwaitingFeedback;
      } else {
        ++rounds;
        c.consumed_round = true;
        c.verdict_required = rounds >= config.max_rounds;
      }
      break;
    }
  }
  c.awaiting_feedback = next == Phase::kAwaitingFeedback;

  Turn turn;
  turn.index = index;
  turn.role = Role::kModel;
  turn.content = std::string(output);
  turn.kind = c.kind;
  turn.prediction = c.prediction;
  turn.question_number = c.question_number;
  turn.numbering_anomaly = c.numbering_anomaly;
  turn.uttered_secret = c.uttered_secret;

  session.turns.push_back(std::move(turn));
  session.round_count = rounds;
  session.phase = next;
  session.uttered_round = uttered_round;
  if (c.prediction) session.pending_prediction = c.prediction;
  if (rule_winner) session.rule_winner = rule_winner;
  return c;
}

Outcome FinalizeSession(Session& session, Feedback feedback,
                        const std::optional<std::string>& revealed_secret) {
  RequireActive(session);
  const bool at_end = session.phase == Phase::kAwaitingFeedback;
  const auto& pending = session.pending_prediction;
  std::optional<std::string> reveal;
  if (revealed_secret.has_value() && !text::IsBlank(*revealed_secret)) {
    reveal = std::string(text::Trim(*revealed_secret));
  }

  Winner winner = Winner::kUser;
  Secret secret = session.secret;
  switch (session.game()) {
    case GameKind::kAkinator:
      if (pending && feedback == Feedback::kConfirmedCorrect) {
        winner = Winner::kModel;
        secret.text = pending->text();
        break;
      }
      if (!at_end) {
        if (pending) {
          throw GameError(ErrorCode::kGameNotOver,
                          "a wrong guess does not end the game; answer No "
                          "to continue");
        }
        throw GameError(ErrorCode::kNoPendingPrediction,
                        "no guess is waiting for feedback");
      }
      if (feedback == Feedback::kConfirmedCorrect) {
        throw GameError(ErrorCode::kNoPendingPrediction,
                        "the model made no guess to confirm");
      }
      if (!reveal) {
        throw GameError(ErrorCode::kMissingRevealedSecret,
                        "reveal the object you were thinking of");
      }
      secret.text = reveal;
      break;
    case GameKind::kTaboo:
      if (!at_end || !session.rule_winner.has_value()) {
        throw GameError(ErrorCode::kNoPendingPrediction,
                        "the game is still in progress");
      }
      winner = *session.rule_winner;
      reveal.reset();
      break;
    case GameKind::kBluffing:
      if (!at_end) {
        throw GameError(ErrorCode::kNoPendingPrediction,
                        "no verdict is waiting for feedback");
      }
      if (pending) {
        const bool correct = feedback == Feedback::kConfirmedCorrect;
        winner = correct ? Winner::kModel : Winner::kUser;
        secret.truthful = correct ? pending->verdict() : !pending->verdict();
        reveal.reset();
      } else if (reveal) {
        const std::string lower = text::ToLower(*reveal);
        if (lower != "true" && lower != "false") {
          throw GameError(ErrorCode::kMissingRevealedSecret,
                          "reveal the statement's truth as true or false");
        }
        secret.truthful = lower == "true";
      }
      break;
  }

  session.secret = std::move(secret);
  Outcome outcome = MakeOutcome(session, winner);
  outcome.revealed_secret = reveal;
  outcome.user_feedback = feedback;
  EndSession(session, outcome);
  return outcome;
}

void AbandonSession(Session& session) {
  RequireActive(session);
  session.status = SessionStatus::kAbandoned;
  session.phase = Phase::kFinished;
  session.pending_prediction.reset();
}

int ReportedRounds(const Session& session) {
  if (session.game() == GameKind::kBluffing) return session.model_turns();
  return session.round_count;
}

std::optional<int> GroundTruthLevel(const Session& session) {
  if (session.game() != GameKind::kBluffing ||
      !session.secret.truthful.has_value()) {
    return std::nullopt;
  }
  return *session.secret.truthful ? 1 : 5;
}

}  // namespace playbench::game
