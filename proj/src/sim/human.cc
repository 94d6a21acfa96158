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

#include "playbench/sim/human.h"

#include "playbench/game/rules.h"
#include "playbench/game/text.h"
#include "playbench/metrics/metrics.h"

namespace playbench::sim {
namespace {

using game::AkinatorAnswer;
using game::Role;

const game::Turn* LastModelTurn(const game::Session& s) {
  for (auto it = s.turns.rbegin(); it != s.turns.rend(); ++it) {
    if (it->role == Role::kModel) return &*it;
  }
  return nullptr;
}

constexpr char kAkinatorOpening[] =
    "I am thinking of an object. Ask your first question.";

}  // namespace

AkinatorHuman::AkinatorHuman(const Ontology& ontology, std::string object,
                             double noise_rate, std::uint64_t seed)
    : ontology_(ontology),
      object_(ontology.FindObject(object)),
      noise_rate_(noise_rate),
      engine_(seed) {
  if (object_ == nullptr) throw AssetError("object not in ontology: " + object);
}

game::SecretSource AkinatorHuman::Secret() const {
  return game::ProvidedSecret{object_->name, std::nullopt, std::nullopt};
}

std::optional<std::string> AkinatorHuman::NextMessage(const game::Session& s) {
  const game::Turn* last = LastModelTurn(s);
  if (last == nullptr) return kAkinatorOpening;
  if (last->prediction.has_value()) return "No";
  const Attribute* attr =
      ontology_.FindQuestion(metrics::QuestionText(last->content));
  if (attr == nullptr) return "Don't Know";
  bool yes = object_->attributes.at(attr->id);
  AkinatorAnswer answer = yes ? AkinatorAnswer::kYes : AkinatorAnswer::kNo;
  if (rng::Bernoulli(engine_, noise_rate_)) {
    answer = yes ? AkinatorAnswer::kProbablyYes : AkinatorAnswer::kProbablyNo;
  }
  return std::string(game::AkinatorAnswerName(answer));
}

bool AkinatorHuman::AcceptsGuess(const game::Session& s) {
  return s.pending_prediction.has_value() &&
         game::NormalizedEquals(s.pending_prediction->text(), object_->name);
}

FinalFeedback AkinatorHuman::Feedback(const game::Session& s) {
  if (AcceptsGuess(s)) return {game::Feedback::kConfirmedCorrect, std::nullopt};
  return {game::Feedback::kConfirmedIncorrect, object_->name};
}

TabooHuman TabooHuman::WithClues(std::string word,
                                 std::vector<std::string> clues,
                                 std::size_t char_limit) {
  for (const std::string& clue : clues) {
    if (game::DetectKeyword(clue, word)) {
      throw AssetError("clue contains the secret word: " + clue);
    }
    if (text::Utf8Length(clue) > char_limit) {
      throw AssetError("clue exceeds the character limit: " + clue);
    }
  }
  TabooHuman h;
  h.word_ = std::move(word);
  h.clues_ = std::move(clues);
  return h;
}

TabooHuman TabooHuman::FromLexicon(const TabooLexicon& lexicon,
                                   std::uint64_t draw_seed) {
  TabooHuman h;
  h.lexicon_ = &lexicon;
  h.draw_seed_ = draw_seed;
  return h;
}

game::SecretSource TabooHuman::Secret() const {
  if (word_) return game::ProvidedSecret{*word_, std::nullopt, std::nullopt};
  return game::WordListDraw{draw_seed_};
}

std::optional<std::string> TabooHuman::NextMessage(const game::Session& s) {
  const std::vector<std::string>* clues = &clues_;
  if (lexicon_ != nullptr) {
    const LexiconEntry* e =
        s.secret.text ? lexicon_->Find(*s.secret.text) : nullptr;
    if (e == nullptr) return std::nullopt;
    clues = &e->clues;
  }
  std::size_t used = static_cast<std::size_t>(s.user_turns());
  if (used < clues->size()) return (*clues)[used];
  return std::string(kOutOfClues);
}

FinalFeedback TabooHuman::Feedback(const game::Session& s) {
  bool right = s.pending_prediction.has_value() && s.secret.text &&
               game::TabooGuessMatches(s.pending_prediction->text(),
                                       *s.secret.text);
  return {right ? game::Feedback::kConfirmedCorrect
                : game::Feedback::kConfirmedIncorrect,
          std::nullopt};
}

BluffingHuman::BluffingHuman(const BluffingBank& bank,
                             std::size_t statement_index, bool truthful,
                             double hedge_rate, std::uint64_t seed)
    : bank_(bank),
      statement_(bank.statements.at(statement_index)),
      truthful_(truthful),
      hedge_rate_(hedge_rate),
      engine_(seed) {}

game::SecretSource BluffingHuman::Secret() const {
  return game::ProvidedSecret{std::nullopt, statement_.statement, truthful_};
}

std::optional<std::string> BluffingHuman::NextMessage(const game::Session& s) {
  const int said = s.user_turns();
  if (said == 0) return statement_.statement;
  const std::string& detail =
      statement_.details[static_cast<std::size_t>(said - 1) %
                         statement_.details.size()];
  if (!truthful_ && rng::Bernoulli(engine_, hedge_rate_)) {
    return bank_.hedges[rng::UniformIndex(engine_, bank_.hedges.size())];
  }
  return detail;
}

FinalFeedback BluffingHuman::Feedback(const game::Session& s) {
  if (s.pending_prediction && s.pending_prediction->is_verdict()) {
    bool right = s.pending_prediction->verdict() == truthful_;
    return {right ? game::Feedback::kConfirmedCorrect
                  : game::Feedback::kConfirmedIncorrect,
            std::nullopt};
  }
  return {game::Feedback::kConfirmedIncorrect, truthful_ ? "true" : "false"};
}

ReplayHuman::ReplayHuman(game::GameKind game, game::SecretSource secret,
                         std::vector<std::string> messages, bool accepts_guess,
                         FinalFeedback feedback)
    : game_(game),
      secret_(std::move(secret)),
      messages_(std::move(messages)),
      accepts_guess_(accepts_guess),
      feedback_(std::move(feedback)) {}

std::optional<std::string> ReplayHuman::NextMessage(const game::Session& s) {
  std::size_t used = static_cast<std::size_t>(s.user_turns());
  if (used >= messages_.size()) return std::nullopt;
  return messages_[used];
}

}  // namespace playbench::sim
