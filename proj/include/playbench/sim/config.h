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

// Platform configuration shared by the CLI and the server.
//
//   {
//     "models": [{"id": "gpt-4o", "flavor": "mock", "script": "sim:gpt-4o"},
//                {"id": "x", "flavor": "openai_compatible",
//                 "endpoint": "https://host/v1", "auth_env": "X_KEY",
//                 "requests_per_minute": 60}],
//     "prompts_dir": "prompts", "retro_dir": "retro",
//     "taboo_words": "taboo_words.txt", "sim_dir": "sim",
//     "limits": {"akinator_max_rounds": 20, "taboo_max_rounds": 5,
//                "taboo_char_limit": 140, "bluffing_max_rounds": 5},
//     "session_expiry_hours": 24, "blind_play": true,
//     "personas": {"name": {"question_skill": 0.5}}
//   }
//
// Relative paths resolve against the directory holding the config file.

#ifndef PLAYBENCH_SIM_CONFIG_H_
#define PLAYBENCH_SIM_CONFIG_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "playbench/gateway/gateway.h"
#include "playbench/retro/retro.h"
#include "playbench/sim/assets.h"
#include "playbench/sim/model.h"

namespace playbench::sim {

struct Limits {
  int akinator_max_rounds = 20;
  int taboo_max_rounds = 5;
  int taboo_char_limit = 140;
  int bluffing_max_rounds = 5;
};

struct PlatformConfig {
  std::filesystem::path base_dir;
  std::vector<gateway::ModelRef> models;
  std::string prompts_dir = "prompts";
  std::string retro_dir = "retro";
  std::string taboo_words = "taboo_words.txt";
  std::string sim_dir = "sim";
  Limits limits;
  double session_expiry_hours = 24.0;
  bool blind_play = true;
  std::map<std::string, Persona> personas;

  // Throws AssetError.
  static PlatformConfig FromJsonText(const std::string& text,
                                     std::filesystem::path base_dir);
  static PlatformConfig FromFile(const std::string& path);

  std::string Resolve(const std::string& path) const;
};

// Everything loaded from a config: prompts, retro prompts, word list and
// simulator assets.
struct Platform {
  PlatformConfig config;
  std::vector<gateway::PromptRef> prompts;
  retro::RetroPrompts retro_prompts;
  std::vector<std::string> taboo_words;
  std::shared_ptr<const SimAssets> assets;

  static Platform Load(PlatformConfig config);

  game::GameConfig GameConfigFor(game::GameKind game) const;
  const gateway::ModelRef& Model(const std::string& id) const;
  const gateway::PromptRef& Prompt(const std::string& id) const;
};

// Registers a client for every configured model: "sim:<persona>" scripts
// get a SimulatedModel, other mock scripts a ScriptedModel, and
// openai_compatible models an HttpChatClient.
std::shared_ptr<gateway::Gateway> BuildGateway(
    const Platform& platform, gateway::Clock clock = gateway::SteadyClock(),
    gateway::Sleeper sleeper = gateway::RealSleeper());

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_CONFIG_H_
