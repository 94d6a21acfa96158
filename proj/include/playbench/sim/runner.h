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

// Drives scripted humans against a model through the game engine, one
// session at a time or as a seeded corpus.

#ifndef PLAYBENCH_SIM_RUNNER_H_
#define PLAYBENCH_SIM_RUNNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "playbench/game/engine.h"
#include "playbench/gateway/gateway.h"
#include "playbench/sim/config.h"
#include "playbench/sim/human.h"

namespace playbench::sim {

struct SimResult {
  game::Session session;
  // Why the session was abandoned, if it was.
  std::optional<std::string> error;
  // The model call failed (as opposed to the script running dry).
  bool remote_failure = false;
};

// Plays one session to a terminal state. Script exhaustion, a rejected
// model turn or a gateway failure abandon the session.
SimResult RunSimulatedSession(ScriptedHuman& human, gateway::ChatClient& client,
                              const gateway::ModelRef& model,
                              const game::GameConfig& config,
                              const game::SessionSetup& setup);

struct CorpusOptions {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<game::GameKind> games = {game::GameKind::kAkinator,
                                       game::GameKind::kTaboo,
                                       game::GameKind::kBluffing};
  // 2024-09-01T00:00:00Z, then one session per minute.
  std::int64_t start_ms = 1725148800000;
  std::int64_t spacing_ms = 60000;
  double answer_noise = 0.1;
  double hedge_rate = 0.6;
  // Assigned round-robin; empty for untagged sessions.
  std::vector<std::string> subset_tags = {"set1", "set2"};
};

struct CorpusSession {
  SimResult result;
  std::optional<std::string> subset_tag;
};

// Session i uses seed DeriveSeed(options.seed, i) for pairing, the secret
// and the human, and carries it as the inference seed.
std::vector<CorpusSession> SimulateCorpus(const Platform& platform,
                                          gateway::ChatClient& client,
                                          const CorpusOptions& options);

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_RUNNER_H_
