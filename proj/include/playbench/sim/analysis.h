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

// Corpus-level reports: metrics per (model, game), retrospective runs over
// a store, and leaderboard rankings.

#ifndef PLAYBENCH_SIM_ANALYSIS_H_
#define PLAYBENCH_SIM_ANALYSIS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "playbench/metrics/metrics.h"
#include "playbench/ranking/ranking.h"
#include "playbench/retro/retro.h"
#include "playbench/store/store.h"

namespace playbench::sim {

struct CorpusAnalysis {
  int records = 0;
  std::optional<double> useful_data_rate;
  // Sorted by (game, model).
  std::vector<metrics::OutcomeReport> outcome;
  std::vector<metrics::ProceduralReport> procedural;
  std::map<std::string, metrics::SessionProcedural> per_session;
};

// Groups with no finished session get no outcome report; groups with no
// trace get no procedural report.
CorpusAnalysis Analyze(const std::vector<store::SessionRecord>& records,
                       const std::vector<retro::RetroTrace>& traces,
                       const metrics::Classifier* classifier);

struct RetroRunStats {
  int replayed = 0;
  int skipped = 0;
  int failed = 0;
};

// Runs the retrospective for every finished session matching `filter`.
// Sessions whose stored trace is complete are skipped; partial traces are
// resumed.
RetroRunStats RunRetroOverStore(store::SessionStore& store,
                                gateway::ChatClient& client,
                                const std::vector<gateway::ModelRef>& models,
                                const retro::RetroPrompts& prompts,
                                const store::CorpusFilter& filter = {});

enum class MetricFamily { kOutcome, kRetro };
std::string_view MetricFamilyName(MetricFamily family);
MetricFamily ParseMetricFamily(std::string_view name);

struct LeaderboardEntry {
  game::GameKind game = game::GameKind::kAkinator;
  MetricFamily family = MetricFamily::kOutcome;
  ranking::Ranking ranking;
};

// One ranking per (game, family) that has at least two models with the
// needed metric.
std::vector<LeaderboardEntry> BuildLeaderboard(
    const CorpusAnalysis& analysis, std::optional<game::GameKind> game = {},
    std::optional<MetricFamily> family = {});

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_ANALYSIS_H_
