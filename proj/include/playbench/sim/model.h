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

// A rule-based stand-in for an LLM player.
//
// The model keeps no state between calls: every reply is a function of the
// persona, the system prompt, the message history and the request seed.
// The game is recognized from the guess anchor in the system prompt.
//
//   Akinator  ranks ontology objects by how many answers they contradict,
//             asks the attribute that best splits the leading candidates
//             and guesses once few remain.
//   Taboo     scores lexicon words by the keywords it noticed in the
//             clues. It may blurt its top candidates and then guesses the
//             one it named.
//   Bluffing  asks bank questions and judges the statement from hedging
//             cues in the answers.
//
// Retrospective requests get the current candidate list or judgment.

#ifndef PLAYBENCH_SIM_MODEL_H_
#define PLAYBENCH_SIM_MODEL_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "playbench/gateway/gateway.h"
#include "playbench/sim/assets.h"

namespace playbench::sim {

struct Persona {
  std::string name;
  // Akinator: chance of asking the best splitting attribute.
  double question_skill = 0.8;
  // Akinator: guess when at most this many candidates lead.
  int guess_threshold = 1;
  // Taboo: chance of noticing a keyword in the clues.
  double recognition = 0.8;
  // Taboo: chance per reply of naming its leading candidates.
  double slip_rate = 0.1;
  // Bluffing: weight given to hedging cues.
  double sensitivity = 0.8;
  // Retro lists: chance of swapping each adjacent pair.
  double retro_noise = 0.1;

  static Persona FromJson(const nlohmann::json& j, const std::string& name);
};

// Personas named after the models of the shipped ranking fixture.
const std::map<std::string, Persona>& BuiltinPersonas();
// Throws AssetError for an unknown name.
Persona FindPersona(const std::string& name,
                    const std::map<std::string, Persona>& overrides = {});

// Game inferred from the guess anchor in a system prompt.
std::optional<game::GameKind> DetectGame(std::string_view system_prompt);

class SimulatedModel : public gateway::ChatClient {
 public:
  SimulatedModel(Persona persona, std::shared_ptr<const SimAssets> assets);

  std::string Complete(const gateway::ModelRef& model,
                       std::string_view system_prompt,
                       const std::vector<gateway::ChatMessage>& messages,
                       const game::InferenceParams& params) override;

  const Persona& persona() const { return persona_; }

 private:
  Persona persona_;
  std::shared_ptr<const SimAssets> assets_;
};

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_MODEL_H_
