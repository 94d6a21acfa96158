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

#include "playbench/sim/fixture.h"

#include "playbench/sim/assets.h"
#include "playbench/game/rules.h"
#include "playbench/sim/human.h"

namespace playbench::sim {

TranscriptFixture TranscriptFixture::FromJsonText(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw AssetError("transcript fixture is not a JSON object");
  }
  try {
    TranscriptFixture f;
    f.name = j.at("name").get<std::string>();
    f.game = game::ParseGameKind(j.at("game").get<std::string>());
    f.model = j.at("model").get<std::string>();
    f.prompt = j.at("prompt").get<std::string>();
    if (j.contains("secret")) f.secret = j["secret"].get<std::string>();
    if (j.contains("aliases")) {
      f.aliases = j["aliases"].get<std::vector<std::string>>();
    }
    for (const auto& t : j.at("turns")) {
      const std::string role = t.at("role").get<std::string>();
      if (role != "user" && role != "model") {
        throw AssetError("unknown role " + role);
      }
      f.turns.push_back({role == "user" ? game::Role::kUser : game::Role::kModel,
                         t.at("content").get<std::string>()});
    }
    if (j.contains("verdict_turn")) {
      f.verdict_turn = j["verdict_turn"].get<std::string>();
    }
    f.feedback = game::ParseFeedback(j.at("feedback").get<std::string>());
    f.retro_replies = j.at("retro_replies").get<std::vector<std::string>>();
    f.expected = j.value("expected", nlohmann::json::object());
    if (f.turns.empty() || f.turns.front().role != game::Role::kUser) {
      throw AssetError("transcript must open with a user turn");
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw AssetError(std::string("transcript fixture: ") + e.what());
  } catch (const game::GameError& e) {
    throw AssetError(std::string("transcript fixture: ") + e.what());
  }
}

TranscriptFixture TranscriptFixture::FromFile(const std::string& path) {
  return FromJsonText(ReadTextFile(path));
}

gateway::ScriptedConversation TranscriptFixture::Conversation() const {
  gateway::ScriptedConversation c;
  c.opening = turns.front().content;
  for (const auto& t : turns) {
    if (t.role == game::Role::kModel) c.replies.push_back(t.content);
  }
  if (verdict_turn) c.replies.push_back(*verdict_turn);
  // Bluffing replays after each answer (0 model turns first); the other
  // games replay after each model turn.
  const int first_key = game == game::GameKind::kBluffing ? 0 : 1;
  for (std::size_t i = 0; i < retro_replies.size(); ++i) {
    c.retro[first_key + static_cast<int>(i)] = retro_replies[i];
  }
  return c;
}

FixtureReplay ReplayFixture(const TranscriptFixture& fixture,
                            const Platform& platform,
                            const std::string& session_id) {
  std::vector<std::string> messages;
  for (const auto& t : fixture.turns) {
    if (t.role == game::Role::kUser) messages.push_back(t.content);
  }
  game::SecretSource secret = game::WithheldSecret{};
  if (fixture.game == game::GameKind::kTaboo) {
    secret = game::ProvidedSecret{fixture.secret, std::nullopt, std::nullopt};
  } else if (fixture.game == game::GameKind::kBluffing) {
    // A confirmed verdict tells us the truth of the statement.
    std::optional<bool> truthful;
    if (fixture.verdict_turn) {
      if (auto p = game::ParseGuess(*fixture.verdict_turn, fixture.game)) {
        truthful = fixture.feedback == game::Feedback::kConfirmedCorrect
                       ? p->verdict()
                       : !p->verdict();
      }
    }
    secret = game::ProvidedSecret{std::nullopt, messages.front(), truthful};
  }
  FinalFeedback feedback{fixture.feedback, std::nullopt};
  if (fixture.game == game::GameKind::kAkinator &&
      fixture.feedback == game::Feedback::kConfirmedIncorrect &&
      fixture.expected.contains("secret")) {
    feedback.revealed_secret = fixture.expected["secret"].get<std::string>();
  }
  ReplayHuman human(fixture.game, secret, messages,
                    fixture.feedback == game::Feedback::kConfirmedCorrect,
                    feedback);

  gateway::ModelRef model;
  model.id = fixture.model;
  model.flavor = gateway::ApiFlavor::kMock;
  model.script = "fixture:" + fixture.name;
  gateway::ScriptedModel client;
  client.Add(fixture.Conversation());

  game::SessionSetup setup;
  setup.session_id = session_id;
  setup.model_ref = fixture.model;
  setup.prompt_ref = fixture.prompt;
  setup.system_prompt = platform.Prompt(fixture.prompt).body;
  FixtureReplay out{RunSimulatedSession(human, client, model,
                                        platform.GameConfigFor(fixture.game),
                                        setup),
                    {}};
  if (out.result.session.finished() &&
      out.result.session.status != game::SessionStatus::kAbandoned) {
    out.trace = retro::RunRetrospective(out.result.session, client, model,
                                        platform.retro_prompts);
  }
  return out;
}

}  // namespace playbench::sim
