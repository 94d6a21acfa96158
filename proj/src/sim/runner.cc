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

#include "playbench/sim/runner.h"

#include <cstdio>
#include <memory>

#include "playbench/game/random.h"
#include "playbench/retro/retro.h"

namespace playbench::sim {
namespace {

using game::GameKind;
using game::Phase;

void Abandon(SimResult& r, std::string why, bool remote = false) {
  game::AbandonSession(r.session);
  r.error = std::move(why);
  r.remote_failure = remote;
}

}  // namespace

SimResult RunSimulatedSession(ScriptedHuman& human, gateway::ChatClient& client,
                              const gateway::ModelRef& model,
                              const game::GameConfig& config,
                              const game::SessionSetup& setup) {
  SimResult r{game::CreateSession(config, setup, human.Secret()), {}, false};
  game::Session& s = r.session;
  const int budget = 8 * config.max_rounds + 16;
  for (int step = 0; !s.finished(); ++step) {
    if (step > budget) {
      Abandon(r, "no progress after " + std::to_string(budget) + " steps");
      break;
    }
    try {
      switch (s.phase) {
        case Phase::kAwaitingUser: {
          if (s.game() == GameKind::kAkinator && s.pending_prediction &&
              human.AcceptsGuess(s)) {
            FinalFeedback fb = human.Feedback(s);
            game::FinalizeSession(s, fb.feedback, fb.revealed_secret);
            break;
          }
          std::optional<std::string> message = human.NextMessage(s);
          if (!message) {
            Abandon(r, "script exhausted");
            break;
          }
          game::ApplyUserTurn(s, *message);
          break;
        }
        case Phase::kAwaitingModel: {
          std::string output;
          try {
            output = client.Complete(model, s.system_prompt,
                                     retro::SessionMessages(s),
                                     s.inference_params);
          } catch (const gateway::GatewayError& e) {
            Abandon(r,
                    std::string(gateway::GatewayErrorKindName(e.kind())) +
                        ": " + e.what(),
                    true);
            break;
          }
          game::ApplyModelTurn(s, output);
          break;
        }
        case Phase::kAwaitingFeedback: {
          FinalFeedback fb = human.Feedback(s);
          game::FinalizeSession(s, fb.feedback, fb.revealed_secret);
          break;
        }
        case Phase::kFinished:
          break;
      }
    } catch (const game::GameError& e) {
      Abandon(r, std::string(game::ErrorCodeName(e.code())) + ": " + e.what());
    }
  }
  return r;
}

std::vector<CorpusSession> SimulateCorpus(const Platform& platform,
                                          gateway::ChatClient& client,
                                          const CorpusOptions& options) {
  std::vector<CorpusSession> out;
  out.reserve(static_cast<std::size_t>(std::max(options.n, 0)));
  const SimAssets& assets = *platform.assets;
  for (int i = 0; i < options.n; ++i) {
    const std::uint64_t s = rng::DeriveSeed(options.seed, static_cast<std::uint64_t>(i));
    gateway::Pairing pairing = gateway::PairRandomly(
        options.games, platform.config.models, platform.prompts, s);

    char id[64];
    std::snprintf(id, sizeof id, "sim-%llu-%05d",
                  static_cast<unsigned long long>(options.seed), i);
    game::SessionSetup setup;
    setup.session_id = id;
    setup.model_ref = pairing.model.id;
    setup.prompt_ref = pairing.prompt.id;
    setup.system_prompt = pairing.prompt.body;
    setup.inference_params.seed =
        static_cast<std::int64_t>(rng::DeriveSeed(s, 3) >> 1);
    setup.created_at_ms = options.start_ms + options.spacing_ms * i;

    rng::Engine secret_engine(rng::DeriveSeed(s, 1));
    const std::uint64_t human_seed = rng::DeriveSeed(s, 4);
    std::unique_ptr<ScriptedHuman> human;
    switch (pairing.game) {
      case GameKind::kAkinator: {
        const auto& objects = assets.ontology.objects();
        const auto& object =
            objects[rng::UniformIndex(secret_engine, objects.size())];
        human = std::make_unique<AkinatorHuman>(
            assets.ontology, object.name, options.answer_noise, human_seed);
        break;
      }
      case GameKind::kTaboo:
        human = std::make_unique<TabooHuman>(
            TabooHuman::FromLexicon(assets.lexicon, rng::DeriveSeed(s, 2)));
        break;
      case GameKind::kBluffing: {
        std::size_t index =
            rng::UniformIndex(secret_engine, assets.bluffing.statements.size());
        bool truthful = rng::Bernoulli(secret_engine, 0.5);
        human = std::make_unique<BluffingHuman>(
            assets.bluffing, index, truthful, options.hedge_rate, human_seed);
        break;
      }
    }
    CorpusSession cs{RunSimulatedSession(*human, client, pairing.model,
                                         platform.GameConfigFor(pairing.game),
                                         setup),
                     std::nullopt};
    if (!options.subset_tags.empty()) {
      cs.subset_tag = options.subset_tags[static_cast<std::size_t>(i) %
                                          options.subset_tags.size()];
    }
    out.push_back(std::move(cs));
  }
  return out;
}

}  // namespace playbench::sim
