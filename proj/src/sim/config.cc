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

#include "playbench/sim/config.h"

#include "json.hpp"
#include "playbench/gateway/http_client.h"
#include "playbench/gateway/mock.h"

namespace playbench::sim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kSimScheme = "sim:";

gateway::ModelRef ModelFromJson(const json& j) {
  gateway::ModelRef m;
  m.id = j.at("id");
  m.flavor = gateway::ParseApiFlavor(j.value("flavor", "mock"));
  m.endpoint = j.value("endpoint", "");
  m.auth_env = j.value("auth_env", "");
  m.remote_model = j.value("remote_model", "");
  m.script = j.value("script", "");
  m.requests_per_minute = j.value("requests_per_minute", 0.0);
  m.Validate();
  return m;
}

}  // namespace

PlatformConfig PlatformConfig::FromJsonText(const std::string& text,
                                            fs::path base_dir) {
  PlatformConfig c;
  c.base_dir = std::move(base_dir);
  try {
    json j = json::parse(text);
    for (const json& m : j.at("models")) c.models.push_back(ModelFromJson(m));
    c.prompts_dir = j.value("prompts_dir", c.prompts_dir);
    c.retro_dir = j.value("retro_dir", c.retro_dir);
    c.taboo_words = j.value("taboo_words", c.taboo_words);
    c.sim_dir = j.value("sim_dir", c.sim_dir);
    if (j.contains("limits")) {
      const json& l = j["limits"];
      c.limits.akinator_max_rounds =
          l.value("akinator_max_rounds", c.limits.akinator_max_rounds);
      c.limits.taboo_max_rounds =
          l.value("taboo_max_rounds", c.limits.taboo_max_rounds);
      c.limits.taboo_char_limit =
          l.value("taboo_char_limit", c.limits.taboo_char_limit);
      c.limits.bluffing_max_rounds =
          l.value("bluffing_max_rounds", c.limits.bluffing_max_rounds);
    }
    c.session_expiry_hours =
        j.value("session_expiry_hours", c.session_expiry_hours);
    c.blind_play = j.value("blind_play", c.blind_play);
    if (j.contains("personas")) {
      for (auto& [name, p] : j["personas"].items()) {
        c.personas[name] = Persona::FromJson(p, name);
      }
    }
  } catch (const json::exception& e) {
    throw AssetError(std::string("malformed config: ") + e.what());
  } catch (const game::GameError& e) {
    throw AssetError(std::string("invalid config: ") + e.what());
  }
  if (c.models.empty()) throw AssetError("config lists no models");
  return c;
}

PlatformConfig PlatformConfig::FromFile(const std::string& path) {
  fs::path p(path);
  return FromJsonText(ReadTextFile(path), p.parent_path());
}

std::string PlatformConfig::Resolve(const std::string& path) const {
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (base_dir / p).string();
}

Platform Platform::Load(PlatformConfig config) {
  Platform p;
  p.prompts = LoadPrompts(config.Resolve(config.prompts_dir));
  p.retro_prompts =
      retro::RetroPrompts::LoadDirectory(config.Resolve(config.retro_dir));
  p.taboo_words = LoadWordList(config.Resolve(config.taboo_words));
  p.assets = std::make_shared<const SimAssets>(
      SimAssets::LoadDirectory(config.Resolve(config.sim_dir)));
  p.config = std::move(config);
  if (p.prompts.empty()) throw AssetError("no prompts found");
  return p;
}

game::GameConfig Platform::GameConfigFor(game::GameKind game) const {
  game::GameConfig c = game::GameConfig::Defaults(game, taboo_words);
  switch (game) {
    case game::GameKind::kAkinator:
      c.max_rounds = config.limits.akinator_max_rounds;
      break;
    case game::GameKind::kTaboo:
      c.max_rounds = config.limits.taboo_max_rounds;
      c.user_char_limit = config.limits.taboo_char_limit;
      break;
    case game::GameKind::kBluffing:
      c.max_rounds = config.limits.bluffing_max_rounds;
      break;
  }
  return c;
}

const gateway::ModelRef& Platform::Model(const std::string& id) const {
  for (const auto& m : config.models) {
    if (m.id == id) return m;
  }
  throw AssetError("unknown model: " + id);
}

const gateway::PromptRef& Platform::Prompt(const std::string& id) const {
  for (const auto& p : prompts) {
    if (p.id == id) return p;
  }
  throw AssetError("unknown prompt: " + id);
}

std::shared_ptr<gateway::Gateway> BuildGateway(const Platform& platform,
                                               gateway::Clock clock,
                                               gateway::Sleeper sleeper) {
  auto gw = std::make_shared<gateway::Gateway>(clock, sleeper);
  for (const gateway::ModelRef& m : platform.config.models) {
    std::shared_ptr<gateway::ChatClient> client;
    if (m.flavor == gateway::ApiFlavor::kOpenAiCompatible) {
      client = std::make_shared<gateway::HttpChatClient>(
          gateway::RetryPolicy{}, gateway::HttplibTransport(), sleeper, clock);
    } else if (m.script.starts_with(kSimScheme)) {
      client = std::make_shared<SimulatedModel>(
          FindPersona(m.script.substr(kSimScheme.size()),
                      platform.config.personas),
          platform.assets);
    } else {
      client = std::make_shared<gateway::ScriptedModel>(
          gateway::ScriptedModel::FromFile(platform.config.Resolve(m.script)));
    }
    gw->Register(m, std::move(client));
  }
  return gw;
}

}  // namespace playbench::sim
