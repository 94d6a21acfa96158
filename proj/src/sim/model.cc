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

#include "playbench/sim/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "playbench/game/random.h"
#include "playbench/game/rules.h"
#include "playbench/game/text.h"
#include "playbench/gateway/mock.h"
#include "playbench/retro/retro.h"

namespace playbench::sim {
namespace {

using game::GameKind;
using game::Role;
using gateway::ChatMessage;

constexpr int kAkinatorRounds = 20;
constexpr int kBluffingQuestions = 5;

std::string WithArticle(std::string_view name) {
  std::string lower = text::ToLower(name);
  bool vowel = !lower.empty() && std::string_view("aeiou").find(lower[0]) !=
                                     std::string_view::npos;
  return (vowel ? "an " : "a ") + lower;
}

double HashUnit(std::uint64_t h) {
  return static_cast<double>(rng::Mix(h) >> 11) * 0x1.0p-53;
}

void NoisySwaps(rng::Engine& engine, std::vector<std::string>& items,
                double noise) {
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    if (rng::Bernoulli(engine, noise)) std::swap(items[i], items[i + 1]);
  }
}

std::vector<std::string> TopItems(std::vector<std::string> items) {
  if (items.size() > static_cast<std::size_t>(retro::kMaxListLength)) {
    items.resize(retro::kMaxListLength);
  }
  return items;
}

struct Conversation {
  std::vector<ChatMessage> messages;
  bool retro = false;
  int model_turns = 0;
};

Conversation Prepare(const std::vector<ChatMessage>& messages) {
  Conversation c;
  c.messages = messages;
  if (!c.messages.empty() && c.messages.back().role == Role::kUser) {
    auto [before, found] = gateway::StripRetroPrompt(c.messages.back().content);
    if (found) {
      c.retro = true;
      if (before.empty()) {
        c.messages.pop_back();
      } else {
        c.messages.back().content = std::string(before);
      }
    }
  }
  for (const ChatMessage& m : c.messages) {
    if (m.role == Role::kModel) ++c.model_turns;
  }
  return c;
}

// ---------------------------------------------------------------- Akinator

struct AkinatorView {
  std::vector<int> mismatches;
  std::set<std::size_t> rejected;
  std::set<std::string> asked;
};

AkinatorView ReadAkinator(const Ontology& ontology,
                          const std::vector<ChatMessage>& messages) {
  AkinatorView view;
  const auto& objects = ontology.objects();
  view.mismatches.assign(objects.size(), 0);
  for (std::size_t i = 0; i + 1 < messages.size(); ++i) {
    if (messages[i].role != Role::kModel || messages[i + 1].role != Role::kUser) {
      continue;
    }
    auto answer = game::ParseAkinatorAnswer(messages[i + 1].content);
    bool yes = answer == game::AkinatorAnswer::kYes ||
               answer == game::AkinatorAnswer::kProbablyYes;
    bool no = answer == game::AkinatorAnswer::kNo ||
              answer == game::AkinatorAnswer::kProbablyNo;
    if (auto guess = game::ParseGuess(messages[i].content, GameKind::kAkinator)) {
      if (yes) continue;
      for (std::size_t k = 0; k < objects.size(); ++k) {
        if (game::NormalizedEquals(objects[k].name, guess->text())) {
          view.rejected.insert(k);
        }
      }
      continue;
    }
    const Attribute* attr =
        ontology.FindQuestion(metrics::QuestionText(messages[i].content));
    if (attr == nullptr) continue;
    view.asked.insert(attr->id);
    if (!yes && !no) continue;
    for (std::size_t k = 0; k < objects.size(); ++k) {
      if (objects[k].attributes.at(attr->id) != yes) ++view.mismatches[k];
    }
  }
  return view;
}

// Non-rejected objects, fewest contradictions first, ties in random order.
std::vector<std::size_t> RankObjects(const AkinatorView& view,
                                     rng::Engine& engine) {
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < view.mismatches.size(); ++k) {
    if (!view.rejected.contains(k)) order.push_back(k);
  }
  rng::Shuffle(engine, std::span<std::size_t>(order));
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return view.mismatches[a] < view.mismatches[b];
  });
  return order;
}

std::string AkinatorTurn(const Persona& persona, const Ontology& ontology,
                         const Conversation& c, rng::Engine& engine) {
  AkinatorView view = ReadAkinator(ontology, c.messages);
  std::vector<std::size_t> ranked = RankObjects(view, engine);
  const auto& objects = ontology.objects();

  if (c.retro) {
    std::vector<std::string> items;
    for (std::size_t k : ranked) items.push_back(objects[k].name);
    items = TopItems(std::move(items));
    NoisySwaps(engine, items, persona.retro_noise);
    return retro::FormatRankedList(items, GameKind::kAkinator,
                                   "Ranked by agreement with the answers so far.");
  }

  const int n = c.model_turns + 1;
  std::vector<std::size_t> best;
  for (std::size_t k : ranked) {
    if (view.mismatches[k] == view.mismatches[ranked.front()]) best.push_back(k);
  }
  auto guess = [&] {
    return "Question " + std::to_string(n) +
           ": This is a guess -- are you thinking of " +
           WithArticle(objects[best.front()].name) + "?";
  };
  if (ranked.empty()) {
    return "Question " + std::to_string(n) + ": Is it something unusual?";
  }
  if (static_cast<int>(best.size()) <= persona.guess_threshold ||
      n >= kAkinatorRounds) {
    return guess();
  }
  std::vector<const Attribute*> unasked;
  const Attribute* split = nullptr;
  long split_balance = 0;
  for (const Attribute& a : ontology.attributes()) {
    if (view.asked.contains(a.id)) continue;
    unasked.push_back(&a);
    long yes = 0;
    for (std::size_t k : best) yes += objects[k].attributes.at(a.id) ? 1 : 0;
    long total = static_cast<long>(best.size());
    if (yes == 0 || yes == total) continue;
    long balance = std::labs(2 * yes - total);
    if (split == nullptr || balance < split_balance) {
      split = &a;
      split_balance = balance;
    }
  }
  if (split == nullptr) return guess();
  const Attribute* pick = split;
  if (!rng::Bernoulli(engine, persona.question_skill)) {
    pick = unasked[rng::UniformIndex(engine, unasked.size())];
  }
  return "Question " + std::to_string(n) + ": " + pick->question;
}

// ------------------------------------------------------------------- Taboo

struct TabooScore {
  const LexiconEntry* entry;
  int score;
  std::uint64_t tie;
};

std::vector<TabooScore> ScoreLexicon(const Persona& persona,
                                     const TabooLexicon& lexicon,
                                     const std::string& clues,
                                     std::uint64_t session_key) {
  std::vector<TabooScore> out;
  for (const LexiconEntry& e : lexicon.entries()) {
    int score = 0;
    for (const std::string& kw : e.keywords) {
      std::uint64_t h = rng::HashString(persona.name + "|" + e.word + "|" + kw,
                                        session_key);
      if (HashUnit(h) >= persona.recognition) continue;
      if (game::DetectKeyword(clues, kw)) ++score;
    }
    out.push_back({&e, score, rng::Mix(rng::HashString(e.word) ^ session_key)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(b.score, a.tie) < std::tie(a.score, b.tie);
  });
  return out;
}

bool NamesAnyWord(const TabooLexicon& lexicon, std::string_view s) {
  for (const LexiconEntry& e : lexicon.entries()) {
    if (game::DetectKeyword(s, e.word)) return true;
  }
  return false;
}

std::string TabooTurn(const Persona& persona, const TabooLexicon& lexicon,
                      const Conversation& c, std::uint64_t session_key,
                      rng::Engine& engine) {
  std::string clues;
  const ChatMessage* last_model = nullptr;
  for (const ChatMessage& m : c.messages) {
    if (m.role == Role::kUser) {
      clues += m.content + "\n";
    } else {
      last_model = &m;
    }
  }
  std::vector<TabooScore> scores =
      ScoreLexicon(persona, lexicon, clues, session_key);

  if (c.retro) {
    std::vector<std::string> items;
    for (const TabooScore& s : scores) items.push_back(s.entry->word);
    items = TopItems(std::move(items));
    NoisySwaps(engine, items, persona.retro_noise);
    return retro::FormatRankedList(items, GameKind::kTaboo,
                                   "Ranked by how well the hints fit.");
  }

  if (last_model != nullptr) {
    for (const TabooScore& s : scores) {
      if (game::DetectKeyword(last_model->content, s.entry->word)) {
        return "I said it, so I will commit. My guess of the word is: " +
               s.entry->word + ".";
      }
    }
  }
  const TabooScore& top = scores.front();
  if (top.score > 0 && rng::Bernoulli(engine, persona.slip_rate)) {
    return "That reminds me of " + scores[0].entry->word + " or maybe " +
           scores[1].entry->word + ".";
  }
  if (top.score == 0) return "I need another hint before I can say more.";
  std::vector<std::string> safe;
  for (const std::string& kw : top.entry->keywords) {
    if (!NamesAnyWord(lexicon, kw)) safe.push_back(kw);
  }
  if (safe.empty()) return "That is an interesting hint.";
  rng::Shuffle(engine, std::span<std::string>(safe));
  std::string reply = "That sounds connected to " + safe[0];
  if (safe.size() > 1) reply += " and " + safe[1];
  return reply + ".";
}

// ---------------------------------------------------------------- Bluffing

double Suspicion(const Persona& persona, const BluffingBank& bank,
                 const Conversation& c, rng::Engine& engine, int* answers) {
  int hedged = 0;
  int count = -1;  // the first user message is the statement
  for (const ChatMessage& m : c.messages) {
    if (m.role != Role::kUser) continue;
    if (++count > 0 && bank.HedgeCount(m.content) > 0) ++hedged;
  }
  *answers = std::max(count, 0);
  double ratio = *answers > 0 ? static_cast<double>(hedged) / *answers : 0.0;
  return persona.sensitivity * ratio +
         (1.0 - persona.sensitivity) * rng::UniformReal(engine);
}

std::string BluffingTurn(const Persona& persona, const BluffingBank& bank,
                         const Conversation& c, rng::Engine& engine) {
  int answers = 0;
  double suspicion = Suspicion(persona, bank, c, engine, &answers);
  if (c.retro) {
    int level = 3;
    if (answers > 0) {
      level = std::clamp(1 + static_cast<int>(suspicion * 5.0), 1, 5);
    }
    return retro::FormatJudgment(level) + "\nReasoning: judged from " +
           std::to_string(answers) + " answers.";
  }
  if (c.model_turns >= kBluffingQuestions) {
    bool truthful = suspicion < 0.3;
    return std::string("I believe your statement is: ") +
           (truthful ? "True" : "False") +
           "\n\nAnalysis: the answers were " +
           (truthful ? "specific and consistent." : "vague in places.");
  }
  std::vector<const std::string*> unused;
  for (const std::string& q : bank.questions) {
    bool used = false;
    for (const ChatMessage& m : c.messages) {
      if (m.role == Role::kModel && metrics::QuestionText(m.content) == q) {
        used = true;
      }
    }
    if (!used) unused.push_back(&q);
  }
  const std::string& q =
      unused.empty() ? bank.questions[rng::UniformIndex(engine, bank.questions.size())]
                     : *unused[rng::UniformIndex(engine, unused.size())];
  return "Question " + std::to_string(c.model_turns + 1) + ": " + q;
}

Persona Make(std::string name, double skill, int threshold, double recognition,
             double slip, double sensitivity, double noise) {
  return Persona{std::move(name), skill, threshold, recognition,
                 slip,            sensitivity, noise};
}

}  // namespace

Persona Persona::FromJson(const nlohmann::json& j, const std::string& name) {
  Persona p;
  auto builtin = BuiltinPersonas().find(name);
  if (builtin != BuiltinPersonas().end()) p = builtin->second;
  p.name = name;
  try {
    p.question_skill = j.value("question_skill", p.question_skill);
    p.guess_threshold = j.value("guess_threshold", p.guess_threshold);
    p.recognition = j.value("recognition", p.recognition);
    p.slip_rate = j.value("slip_rate", p.slip_rate);
    p.sensitivity = j.value("sensitivity", p.sensitivity);
    p.retro_noise = j.value("retro_noise", p.retro_noise);
  } catch (const nlohmann::json::exception& e) {
    throw AssetError("malformed persona " + name + ": " + e.what());
  }
  return p;
}

const std::map<std::string, Persona>& BuiltinPersonas() {
  static const std::map<std::string, Persona> kPersonas = [] {
    std::map<std::string, Persona> m;
    for (Persona p : {Make("claude-3.5-sonnet", 0.9, 1, 0.9, 0.05, 0.9, 0.05),
                      Make("gemini-1.5-pro", 0.8, 1, 0.85, 0.08, 0.8, 0.1),
                      Make("gpt-4o", 0.8, 2, 0.9, 0.06, 0.75, 0.1),
                      Make("llama-3.1-405b", 0.65, 2, 0.75, 0.12, 0.6, 0.2),
                      Make("mistral-large-2", 0.35, 3, 0.6, 0.2, 0.5, 0.3)}) {
      m.emplace(p.name, p);
    }
    return m;
  }();
  return kPersonas;
}

Persona FindPersona(const std::string& name,
                    const std::map<std::string, Persona>& overrides) {
  if (auto it = overrides.find(name); it != overrides.end()) return it->second;
  auto it = BuiltinPersonas().find(name);
  if (it == BuiltinPersonas().end()) {
    throw AssetError("unknown simulator persona: " + name);
  }
  return it->second;
}

std::optional<GameKind> DetectGame(std::string_view system_prompt) {
  if (text::FindIgnoreCase(system_prompt, "are you thinking of") !=
      std::string_view::npos) {
    return GameKind::kAkinator;
  }
  if (text::FindIgnoreCase(system_prompt, "my guess of the word is") !=
      std::string_view::npos) {
    return GameKind::kTaboo;
  }
  if (text::FindIgnoreCase(system_prompt, "i believe your statement is") !=
      std::string_view::npos) {
    return GameKind::kBluffing;
  }
  return std::nullopt;
}

SimulatedModel::SimulatedModel(Persona persona,
                               std::shared_ptr<const SimAssets> assets)
    : persona_(std::move(persona)), assets_(std::move(assets)) {}

std::string SimulatedModel::Complete(const gateway::ModelRef&,
                                     std::string_view system_prompt,
                                     const std::vector<ChatMessage>& messages,
                                     const game::InferenceParams& params) {
  std::optional<GameKind> game = DetectGame(system_prompt);
  if (!game) {
    throw gateway::GatewayError(gateway::GatewayError::Kind::kInvalidRequest,
                                "simulator cannot tell the game from the prompt");
  }
  Conversation c = Prepare(messages);
  const std::uint64_t seed = static_cast<std::uint64_t>(params.seed.value_or(0));
  std::uint64_t h = rng::HashString(system_prompt, rng::HashString(persona_.name));
  for (const ChatMessage& m : c.messages) {
    h = rng::HashString(game::RoleName(m.role), h);
    h = rng::HashString(m.content, h);
  }
  rng::Engine engine(rng::Mix(h ^ (c.retro ? 0x5e7f0ULL : 0)) ^ seed);
  std::uint64_t session_key = rng::Mix(
      rng::HashString(c.messages.empty() ? "" : c.messages.front().content) ^
      seed);

  switch (*game) {
    case GameKind::kAkinator:
      return AkinatorTurn(persona_, assets_->ontology, c, engine);
    case GameKind::kTaboo:
      return TabooTurn(persona_, assets_->lexicon, c, session_key, engine);
    case GameKind::kBluffing:
      return BluffingTurn(persona_, assets_->bluffing, c, engine);
  }
  return {};
}

}  // namespace playbench::sim
