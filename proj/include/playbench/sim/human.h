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

// Scripted human players.

#ifndef PLAYBENCH_SIM_HUMAN_H_
#define PLAYBENCH_SIM_HUMAN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "playbench/game/engine.h"
#include "playbench/game/random.h"
#include "playbench/sim/assets.h"

namespace playbench::sim {

struct FinalFeedback {
  game::Feedback feedback = game::Feedback::kConfirmedIncorrect;
  std::optional<std::string> revealed_secret;
};

class ScriptedHuman {
 public:
  virtual ~ScriptedHuman() = default;

  virtual game::GameKind game() const = 0;
  virtual game::SecretSource Secret() const = 0;
  // Next user message, nullopt when the script has nothing left to say.
  virtual std::optional<std::string> NextMessage(const game::Session& s) = 0;
  // Akinator: whether the pending guess names the object.
  virtual bool AcceptsGuess(const game::Session& s) = 0;
  virtual FinalFeedback Feedback(const game::Session& s) = 0;
};

// Answers from the ontology's attribute table. With probability
// `noise_rate` a Yes or No is softened to Probably Yes or Probably No.
class AkinatorHuman : public ScriptedHuman {
 public:
  // Throws AssetError when the object is not in the ontology.
  AkinatorHuman(const Ontology& ontology, std::string object,
                double noise_rate, std::uint64_t seed);

  game::GameKind game() const override { return game::GameKind::kAkinator; }
  game::SecretSource Secret() const override;
  std::optional<std::string> NextMessage(const game::Session& s) override;
  bool AcceptsGuess(const game::Session& s) override;
  FinalFeedback Feedback(const game::Session& s) override;

 private:
  const Ontology& ontology_;
  const OntologyObject* object_;
  double noise_rate_;
  rng::Engine engine_;
};

// Gives clues in order. Built from explicit clues, or from the lexicon
// entry of whatever word the session drew.
class TabooHuman : public ScriptedHuman {
 public:
  // Throws AssetError when a clue contains the word or is over the limit.
  static TabooHuman WithClues(std::string word, std::vector<std::string> clues,
                              std::size_t char_limit = 140);
  static TabooHuman FromLexicon(const TabooLexicon& lexicon,
                                std::uint64_t draw_seed);

  game::GameKind game() const override { return game::GameKind::kTaboo; }
  game::SecretSource Secret() const override;
  std::optional<std::string> NextMessage(const game::Session& s) override;
  bool AcceptsGuess(const game::Session&) override { return false; }
  FinalFeedback Feedback(const game::Session& s) override;

  // Sent once the clues run out, so the model can still take its guess.
  static constexpr char kOutOfClues[] = "That was my last hint. Your turn.";

 private:
  TabooHuman() = default;

  std::optional<std::string> word_;
  std::vector<std::string> clues_;
  const TabooLexicon* lexicon_ = nullptr;
  std::uint64_t draw_seed_ = 0;
};

// Tells the statement, then answers. A truthful player answers with
// concrete details; a bluffer hedges with probability `hedge_rate`.
class BluffingHuman : public ScriptedHuman {
 public:
  BluffingHuman(const BluffingBank& bank, std::size_t statement_index,
                bool truthful, double hedge_rate, std::uint64_t seed);

  game::GameKind game() const override { return game::GameKind::kBluffing; }
  game::SecretSource Secret() const override;
  std::optional<std::string> NextMessage(const game::Session& s) override;
  bool AcceptsGuess(const game::Session&) override { return false; }
  FinalFeedback Feedback(const game::Session& s) override;

 private:
  const BluffingBank& bank_;
  const BluffingStatement& statement_;
  bool truthful_;
  double hedge_rate_;
  rng::Engine engine_;
};

// Replays fixed user messages, for recorded transcripts.
class ReplayHuman : public ScriptedHuman {
 public:
  ReplayHuman(game::GameKind game, game::SecretSource secret,
              std::vector<std::string> messages, bool accepts_guess,
              FinalFeedback feedback);

  game::GameKind game() const override { return game_; }
  game::SecretSource Secret() const override { return secret_; }
  std::optional<std::string> NextMessage(const game::Session& s) override;
  bool AcceptsGuess(const game::Session&) override { return accepts_guess_; }
  FinalFeedback Feedback(const game::Session&) override { return feedback_; }

 private:
  game::GameKind game_;
  game::SecretSource secret_;
  std::vector<std::string> messages_;
  bool accepts_guess_;
  FinalFeedback feedback_;
};

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_HUMAN_H_
