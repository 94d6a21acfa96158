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

#include "playbench/sim/analysis.h"

#include <tuple>

namespace playbench::sim {
namespace {

using game::GameKind;
using Key = std::pair<GameKind, std::string>;

bool HasMetric(const metrics::ProceduralReport& r) {
  if (r.game == GameKind::kBluffing) {
    return r.avg_final_rank.has_value() && r.spearman_rho.has_value();
  }
  return r.recall_rate.has_value();
}

}  // namespace

CorpusAnalysis Analyze(const std::vector<store::SessionRecord>& records,
                       const std::vector<retro::RetroTrace>& traces,
                       const metrics::Classifier* classifier) {
  CorpusAnalysis a;
  a.records = static_cast<int>(records.size());
  a.useful_data_rate = store::UsefulDataRate(records);

  std::map<std::string, const retro::RetroTrace*> trace_of;
  for (const auto& t : traces) trace_of[t.session_id] = &t;

  std::map<Key, std::vector<const store::SessionRecord*>> groups;
  for (const auto& r : records) {
    groups[{r.session.game(), r.session.model_ref}].push_back(&r);
  }
  for (const auto& [key, group] : groups) {
    std::vector<const game::Session*> sessions;
    bool any_finished = false;
    for (const auto* r : group) {
      sessions.push_back(&r->session);
      any_finished |= r->session.outcome.has_value();
    }
    if (any_finished) a.outcome.push_back(metrics::OutcomeMetrics(sessions));

    std::vector<metrics::SessionProcedural> per;
    std::vector<const game::Session*> with_trace;
    for (const auto* r : group) {
      if (!r->session.outcome.has_value()) continue;
      auto it = trace_of.find(r->session.session_id);
      if (it == trace_of.end()) continue;
      const metrics::Classifier* c =
          key.first == GameKind::kAkinator ? classifier : nullptr;
      per.push_back(metrics::ComputeSessionProcedural(r->session, *it->second,
                                                      r->aliases, c));
      with_trace.push_back(&r->session);
      a.per_session[r->session.session_id] = per.back();
    }
    if (!per.empty()) {
      a.procedural.push_back(
          metrics::AggregateProcedural(key.second, key.first, per, with_trace));
    }
  }
  return a;
}

RetroRunStats RunRetroOverStore(store::SessionStore& store,
                                gateway::ChatClient& client,
                                const std::vector<gateway::ModelRef>& models,
                                const retro::RetroPrompts& prompts,
                                const store::CorpusFilter& filter) {
  RetroRunStats stats;
  std::map<std::string, retro::RetroTrace> existing;
  for (auto& t : store.LoadTraces()) existing[t.session_id] = std::move(t);
  for (const store::SessionRecord& r : store.Load(filter)) {
    if (!r.session.outcome.has_value()) continue;
    const retro::RetroTrace* resume = nullptr;
    if (auto it = existing.find(r.session.session_id); it != existing.end()) {
      if (it->second.complete()) {
        ++stats.skipped;
        continue;
      }
      resume = &it->second;
    }
    const gateway::ModelRef* model = nullptr;
    for (const auto& m : models) {
      if (m.id == r.session.model_ref) model = &m;
    }
    if (model == nullptr) {
      throw gateway::GatewayError(gateway::GatewayError::Kind::kUnknownModel,
                                  "no configured model " + r.session.model_ref);
    }
    retro::RetroTrace trace =
        retro::RunRetrospective(r.session, client, *model, prompts, resume);
    store.AppendTrace(trace);
    if (trace.complete()) {
      ++stats.replayed;
    } else {
      ++stats.failed;
    }
  }
  return stats;
}

std::string_view MetricFamilyName(MetricFamily family) {
  return family == MetricFamily::kOutcome ? "outcome" : "retro";
}

MetricFamily ParseMetricFamily(std::string_view name) {
  if (name == "outcome") return MetricFamily::kOutcome;
  if (name == "retro") return MetricFamily::kRetro;
  throw std::invalid_argument("unknown metric family: " + std::string(name));
}

std::vector<LeaderboardEntry> BuildLeaderboard(
    const CorpusAnalysis& analysis, std::optional<GameKind> game,
    std::optional<MetricFamily> family) {
  std::vector<LeaderboardEntry> out;
  for (GameKind g : game::kAllGames) {
    if (game && *game != g) continue;
    std::vector<metrics::OutcomeReport> outcome;
    for (const auto& r : analysis.outcome) {
      if (r.game == g) outcome.push_back(r);
    }
    if ((!family || *family == MetricFamily::kOutcome) && outcome.size() >= 2) {
      for (auto& r : ranking::BuildRankings(outcome, {})) {
        out.push_back({g, MetricFamily::kOutcome, std::move(r)});
      }
    }
    std::vector<metrics::ProceduralReport> procedural;
    for (const auto& r : analysis.procedural) {
      bool has_outcome = false;
      for (const auto& o : outcome) has_outcome |= o.model == r.model;
      if (r.game == g && HasMetric(r) && has_outcome) procedural.push_back(r);
    }
    if ((!family || *family == MetricFamily::kRetro) && procedural.size() >= 2) {
      for (auto& r : ranking::BuildRankings(outcome, procedural)) {
        if (r.id.ends_with("-retro")) {
          out.push_back({g, MetricFamily::kRetro, std::move(r)});
        }
      }
    }
  }
  return out;
}

}  // namespace playbench::sim
