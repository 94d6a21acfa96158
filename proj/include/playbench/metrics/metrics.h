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

// Outcome and procedural metrics over finished sessions and their
// retrospective traces.
//
// Session-level values are plain means over a session's rounds; model-level
// values are unweighted means over the sessions where the value is defined.
// Retro entries that could not be parsed are left out of every denominator.

#ifndef PLAYBENCH_METRICS_METRICS_H_
#define PLAYBENCH_METRICS_METRICS_H_

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "playbench/game/types.h"
#include "playbench/retro/retro.h"

namespace playbench::metrics {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- outcome

struct PromptBreakdown {
  std::string prompt_ref;
  int sessions = 0;
  int wins = 0;
  long total_rounds = 0;
  double win_rate = 0.0;
  double avg_rounds = 0.0;
};

struct OutcomeReport {
  std::string model;
  game::GameKind game = game::GameKind::kAkinator;
  int sessions = 0;
  int wins = 0;
  long total_rounds = 0;
  double avg_win_rate = 0.0;  // wins / sessions
  double avg_rounds = 0.0;    // total_rounds / sessions
  std::vector<PromptBreakdown> per_prompt;  // sorted by prompt_ref
  // Population standard deviation of the per-prompt means.
  double prompt_win_rate_std = 0.0;
  double prompt_rounds_std = 0.0;
};

// Sessions without an outcome (active, abandoned) are skipped. Throws
// MetricError when nothing remains or models/games are mixed.
OutcomeReport OutcomeMetrics(const std::vector<const game::Session*>& sessions);

double PopulationStd(const std::vector<double>& values);

// ------------------------------------------------------------- procedural

struct Recall {
  int lists = 0;
  int containing = 0;
  int top5 = 0;
  int top10 = 0;
  double recall = 0.0;
  double top5_recall = 0.0;
  double top10_recall = 0.0;
};

// Does `item` name the secret? Uses game::NormalizedEquals against the
// secret and every alias.
bool MatchesSecret(std::string_view item, std::string_view secret,
                   const std::vector<std::string>& aliases = {});

// 1-based rank of the secret in `items`.
std::optional<int> RankOf(const std::vector<std::string>& items,
                          std::string_view secret,
                          const std::vector<std::string>& aliases = {});

// Throws MetricError when the trace has no usable list.
Recall RecallRates(const retro::RetroTrace& trace, std::string_view secret,
                   const std::vector<std::string>& aliases = {});

struct FirstAndFinal {
  std::optional<int> first_appear_round;
  std::optional<int> final_rank;
};

FirstAndFinal FirstAppearAndFinalRank(
    const retro::RetroTrace& trace, std::string_view secret,
    const std::vector<std::string>& aliases = {});

// Yes/no judge for one item. nullopt marks the item unclassifiable.
using Classifier = std::function<std::optional<bool>(
    std::string_view question, std::string_view item)>;

struct PartitionResult {
  std::string question;
  std::vector<std::string> yes_items;
  std::vector<std::string> no_items;
  int unclassifiable = 0;
  int list_size = 0;
  // Every item was unclassifiable.
  bool flagged = false;

  int size_yes() const { return static_cast<int>(yes_items.size()); }
  int size_no() const { return static_cast<int>(no_items.size()); }
};

PartitionResult PartitionObjects(std::string_view question,
                                 const std::vector<std::string>& prior_list,
                                 const Classifier& classifier);

// |size_yes - size_no| / list_size. Throws MetricError on an empty list.
double DisparityRatio(const PartitionResult& partition);
double DisparityRatio(int size_yes, int size_no, int list_size);

// rho = 1 - 6 / (N (N^2 - 1)) * sum (i - |j_i - g|)^2, as written, so the
// value can leave [-1, 1]. Throws MetricError when N < 2.
double SpearmanConsistency(const std::vector<int>& judgments,
                           int ground_truth_level);

// Mean absolute step between consecutive judgments. Throws when N < 2.
double HoppingPenalty(const std::vector<int>& judgments);

struct BluffingFirstAndFinal {
  std::optional<int> first_correct_round;  // strict j_i == g
  int final_rank = 0;                      // |j_N - g|
};

BluffingFirstAndFinal BluffingFirstAndFinalRank(
    const std::vector<int>& judgments, int ground_truth_level);

struct BluffingRecall {
  int with_verdict = 0;
  int correct = 0;
  int no_verdict = 0;
  std::optional<double> recall;           // correct / with_verdict
  std::optional<double> no_verdict_rate;  // no_verdict / all
};

// Sessions need a final verdict and known truth to enter the denominator.
BluffingRecall BluffingRecallRate(
    const std::vector<const game::Session*>& sessions);

// Post-question judgments of a Bluffing trace (round >= 1, parsed only).
std::vector<int> TraceJudgments(const retro::RetroTrace& trace);

// Question text of a model turn with the "Question N:" header removed.
std::string QuestionText(std::string_view content);

struct SessionProcedural {
  std::string session_id;
  std::string prompt_ref;
  int usable_entries = 0;
  int flagged_entries = 0;
  std::optional<Recall> recall;
  std::optional<double> disparity;
  int disparity_questions = 0;
  int flagged_partitions = 0;
  std::optional<int> first_appear_round;
  std::optional<int> final_rank;
  std::optional<double> spearman;
  std::optional<double> hopping;
  std::optional<int> first_correct_round;
  std::optional<int> bluffing_final_rank;
};

// `classifier` is needed for disparity (Akinator) and may be null.
SessionProcedural ComputeSessionProcedural(
    const game::Session& session, const retro::RetroTrace& trace,
    const std::vector<std::string>& aliases,
    const Classifier* classifier);

struct ProceduralReport {
  std::string model;
  game::GameKind game = game::GameKind::kAkinator;
  int sessions = 0;
  int flagged_entries = 0;
  std::optional<double> recall_rate;
  std::optional<double> top5_recall;
  std::optional<double> top10_recall;
  std::optional<double> disparity_ratio;
  std::optional<double> avg_first_appear_round;
  std::optional<double> avg_final_rank;
  // Sessions whose final list or judgment did not include the secret.
  int final_rank_missing = 0;
  std::optional<double> spearman_rho;
  std::optional<double> hopping_penalty;
  std::optional<double> bluffing_recall;
  std::optional<double> no_verdict_rate;
};

ProceduralReport AggregateProcedural(
    std::string model, game::GameKind game,
    const std::vector<SessionProcedural>& per_session,
    const std::vector<const game::Session*>& sessions);

// Mean of the defined values, nullopt when none are.
std::optional<double> MeanOf(const std::vector<std::optional<double>>& values);

// ---------------------------------------------------------------- subsets

struct TaggedSession {
  const game::Session* session = nullptr;
  std::optional<std::string> tag;
};

struct SubsetComparison {
  std::string model;
  game::GameKind game = game::GameKind::kAkinator;
  // Absent when the subset has no finished session for this model.
  std::optional<OutcomeReport> a;
  std::optional<OutcomeReport> b;
};

// Throws MetricError naming the tags that no session carries.
std::vector<SubsetComparison> CompareSubsets(
    const std::vector<TaggedSession>& corpus, const std::string& tag_a,
    const std::string& tag_b);

}  // namespace playbench::metrics

#endif  // PLAYBENCH_METRICS_METRICS_H_
