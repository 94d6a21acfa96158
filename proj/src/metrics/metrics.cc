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

#include "playbench/metrics/metrics.h"

#include <cmath>
#include <cstdlib>
#include <set>
#include <tuple>

#include "playbench/game/engine.h"
#include "playbench/game/rules.h"
#include "playbench/game/text.h"

namespace playbench::metrics {
namespace {

using game::GameKind;
using game::Session;

bool HasOutcome(const Session& s) {
  return s.outcome.has_value() && (s.status == game::SessionStatus::kModelWon ||
                                   s.status == game::SessionStatus::kUserWon);
}

std::vector<const retro::RetroEntry*> UsableLists(
    const retro::RetroTrace& trace) {
  std::vector<const retro::RetroEntry*> out;
  for (const retro::RetroEntry& e : trace.entries) {
    if (e.usable() && e.list.has_value()) out.push_back(&e);
  }
  return out;
}

void RequireLevel(int level) {
  if (level < 1 || level > 5) {
    throw MetricError("judgment level out of range: " + std::to_string(level));
  }
}

std::optional<bool> FinalVerdict(const Session& s) {
  for (auto it = s.turns.rbegin(); it != s.turns.rend(); ++it) {
    if (it->role != game::Role::kModel) continue;
    if (it->prediction.has_value() && it->prediction->is_verdict()) {
      return it->prediction->verdict();
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

double PopulationStd(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

OutcomeReport OutcomeMetrics(const std::vector<const Session*>& sessions) {
  OutcomeReport report;
  std::map<std::string, PromptBreakdown> prompts;
  for (const Session* s : sessions) {
    if (!HasOutcome(*s)) continue;
    if (report.sessions == 0) {
      report.model = s->model_ref;
      report.game = s->game();
    } else if (s->model_ref != report.model || s->game() != report.game) {
      throw MetricError("outcome metrics need sessions of one model and game");
    }
    const int win = s->outcome->win_indicator;
    const int rounds = s->outcome->rounds;
    ++report.sessions;
    report.wins += win;
    report.total_rounds += rounds;
    PromptBreakdown& p = prompts[s->prompt_ref];
    p.prompt_ref = s->prompt_ref;
    ++p.sessions;
    p.wins += win;
    p.total_rounds += rounds;
  }
  if (report.sessions == 0) {
    throw MetricError("no finished sessions to aggregate");
  }
  report.avg_win_rate =
      static_cast<double>(report.wins) / static_cast<double>(report.sessions);
  report.avg_rounds = static_cast<double>(report.total_rounds) /
                      static_cast<double>(report.sessions);
  std::vector<double> win_rates;
  std::vector<double> rounds;
  for (auto& [id, p] : prompts) {
    p.win_rate = static_cast<double>(p.wins) / static_cast<double>(p.sessions);
    p.avg_rounds =
        static_cast<double>(p.total_rounds) / static_cast<double>(p.sessions);
    win_rates.push_back(p.win_rate);
    rounds.push_back(p.avg_rounds);
    report.per_prompt.push_back(p);
  }
  report.prompt_win_rate_std = PopulationStd(win_rates);
  report.prompt_rounds_std = PopulationStd(rounds);
  return report;
}

bool MatchesSecret(std::string_view item, std::string_view secret,
                   const std::vector<std::string>& aliases) {
  if (game::NormalizedEquals(item, secret)) return true;
  for (const std::string& alias : aliases) {
    if (game::NormalizedEquals(item, alias)) return true;
  }
  return false;
}

std::optional<int> RankOf(const std::vector<std::string>& items,
                          std::string_view secret,
                          const std::vector<std::string>& aliases) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (MatchesSecret(items[i], secret, aliases)) {
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

Recall RecallRates(const retro::RetroTrace& trace, std::string_view secret,
                   const std::vector<std::string>& aliases) {
  Recall r;
  for (const retro::RetroEntry* e : UsableLists(trace)) {
    ++r.lists;
    auto rank = RankOf(e->list->items, secret, aliases);
    if (!rank) continue;
    ++r.containing;
    if (*rank <= 5) ++r.top5;
    if (*rank <= 10) ++r.top10;
  }
  if (r.lists == 0) {
    throw MetricError("trace " + trace.session_id + " has no parsed lists");
  }
  const double n = r.lists;
  r.recall = r.containing / n;
  r.top5_recall = r.top5 / n;
  r.top10_recall = r.top10 / n;
  return r;
}

FirstAndFinal FirstAppearAndFinalRank(const retro::RetroTrace& trace,
                                      std::string_view secret,
                                      const std::vector<std::string>& aliases) {
  FirstAndFinal result;
  auto lists = UsableLists(trace);
  for (const retro::RetroEntry* e : lists) {
    if (RankOf(e->list->items, secret, aliases)) {
      result.first_appear_round = e->round;
      break;
    }
  }
  if (!lists.empty()) {
    result.final_rank = RankOf(lists.back()->list->items, secret, aliases);
  }
  return result;
}

PartitionResult PartitionObjects(std::string_view question,
                                 const std::vector<std::string>& prior_list,
                                 const Classifier& classifier) {
  PartitionResult p;
  p.question = std::string(question);
  p.list_size = static_cast<int>(prior_list.size());
  for (const std::string& item : prior_list) {
    std::optional<bool> label;
    try {
      label = classifier(question, item);
    } catch (const std::exception&) {
      label.reset();
    }
    if (!label.has_value()) {
      ++p.unclassifiable;
    } else if (*label) {
      p.yes_items.push_back(item);
    } else {
      p.no_items.push_back(item);
    }
  }
  p.flagged = p.list_size > 0 && p.unclassifiable == p.list_size;
  return p;
}

double DisparityRatio(int size_yes, int size_no, int list_size) {
  if (list_size <= 0) throw MetricError("disparity ratio of an empty list");
  return static_cast<double>(std::abs(size_yes - size_no)) /
         static_cast<double>(list_size);
}

double DisparityRatio(const PartitionResult& partition) {
  return DisparityRatio(partition.size_yes(), partition.size_no(),
                        partition.list_size);
}

double SpearmanConsistency(const std::vector<int>& judgments,
                           int ground_truth_level) {
  RequireLevel(ground_truth_level);
  const long n = static_cast<long>(judgments.size());
  if (n < 2) throw MetricError("Spearman consistency needs N >= 2");
  long sum = 0;
  for (long i = 1; i <= n; ++i) {
    int j = judgments[i - 1];
    RequireLevel(j);
    long d = i - std::abs(j - ground_truth_level);
    sum += d * d;
  }
  // 1 - 6*sum / (n(n^2-1)) as a single rounding of the exact fraction.
  const long denom = n * (n * n - 1);
  return static_cast<double>(denom - 6 * sum) / static_cast<double>(denom);
}

double HoppingPenalty(const std::vector<int>& judgments) {
  if (judgments.size() < 2) throw MetricError("hopping penalty needs N >= 2");
  long total = 0;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    RequireLevel(judgments[i]);
    if (i > 0) total += std::abs(judgments[i] - judgments[i - 1]);
  }
  return static_cast<double>(total) /
         static_cast<double>(judgments.size() - 1);
}

BluffingFirstAndFinal BluffingFirstAndFinalRank(
    const std::vector<int>& judgments, int ground_truth_level) {
  RequireLevel(ground_truth_level);
  if (judgments.empty()) throw MetricError("no judgments");
  BluffingFirstAndFinal result;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    RequireLevel(judgments[i]);
    if (!result.first_correct_round && judgments[i] == ground_truth_level) {
      result.first_correct_round = static_cast<int>(i) + 1;
    }
  }
  result.final_rank = std::abs(judgments.back() - ground_truth_level);
  return result;
}

BluffingRecall BluffingRecallRate(const std::vector<const Session*>& sessions) {
  BluffingRecall r;
  for (const Session* s : sessions) {
    if (s->game() != GameKind::kBluffing || !HasOutcome(*s)) continue;
    std::optional<bool> verdict = FinalVerdict(*s);
    if (!verdict) {
      ++r.no_verdict;
      continue;
    }
    if (!s->secret.truthful.has_value()) continue;
    ++r.with_verdict;
    if (*verdict == *s->secret.truthful) ++r.correct;
  }
  if (r.with_verdict > 0) {
    r.recall = static_cast<double>(r.correct) / r.with_verdict;
  }
  if (r.with_verdict + r.no_verdict > 0) {
    r.no_verdict_rate =
        static_cast<double>(r.no_verdict) / (r.with_verdict + r.no_verdict);
  }
  return r;
}

std::vector<int> TraceJudgments(const retro::RetroTrace& trace) {
  std::vector<int> out;
  for (const retro::RetroEntry& e : trace.entries) {
    if (e.round >= 1 && e.usable() && e.judgment.has_value()) {
      out.push_back(e.judgment->level);
    }
  }
  return out;
}

std::string QuestionText(std::string_view content) {
  std::string_view s = text::Trim(content);
  if (game::ParseQuestionHeader(s).has_value()) {
    std::size_t colon = s.find(':');
    s = s.substr(colon + 1);
    while (!s.empty() && s.front() == '*') s.remove_prefix(1);
  }
  return std::string(text::Trim(s));
}

SessionProcedural ComputeSessionProcedural(const Session& session,
                                           const retro::RetroTrace& trace,
                                           const std::vector<std::string>& aliases,
                                           const Classifier* classifier) {
  SessionProcedural sp;
  sp.session_id = session.session_id;
  sp.prompt_ref = session.prompt_ref;
  for (const retro::RetroEntry& e : trace.entries) {
    if (e.usable()) {
      ++sp.usable_entries;
    } else {
      ++sp.flagged_entries;
    }
  }

  if (session.game() == GameKind::kBluffing) {
    std::vector<int> judgments = TraceJudgments(trace);
    if (judgments.size() >= 2) sp.hopping = HoppingPenalty(judgments);
    std::optional<int> g = game::GroundTruthLevel(session);
    if (g.has_value() && !judgments.empty()) {
      if (judgments.size() >= 2) sp.spearman = SpearmanConsistency(judgments, *g);
      auto ff = BluffingFirstAndFinalRank(judgments, *g);
      sp.first_correct_round = ff.first_correct_round;
      sp.bluffing_final_rank = ff.final_rank;
    }
    return sp;
  }

  if (!session.secret.text.has_value() || UsableLists(trace).empty()) {
    return sp;
  }
  const std::string& secret = *session.secret.text;
  sp.recall = RecallRates(trace, secret, aliases);
  auto ff = FirstAppearAndFinalRank(trace, secret, aliases);
  sp.first_appear_round = ff.first_appear_round;
  sp.final_rank = ff.final_rank;

  if (session.game() == GameKind::kAkinator && classifier != nullptr) {
    std::map<int, const retro::RetroEntry*> by_round;
    for (const retro::RetroEntry* e : UsableLists(trace)) by_round[e->round] = e;
    std::vector<double> ratios;
    int round = 0;
    for (const game::Turn& turn : session.turns) {
      if (turn.role != game::Role::kModel) continue;
      ++round;
      if (turn.kind != game::TurnKind::kOrdinary ||
          turn.content.find('?') == std::string::npos) {
        continue;
      }
      auto prior = by_round.find(round - 1);
      if (prior == by_round.end()) continue;
      PartitionResult p = PartitionObjects(QuestionText(turn.content),
                                           prior->second->list->items,
                                           *classifier);
      if (p.flagged) {
        ++sp.flagged_partitions;
        continue;
      }
      ratios.push_back(DisparityRatio(p));
    }
    sp.disparity_questions = static_cast<int>(ratios.size());
    if (!ratios.empty()) {
      double sum = 0.0;
      for (double r : ratios) sum += r;
      sp.disparity = sum / static_cast<double>(ratios.size());
    }
  }
  return sp;
}

std::optional<double> MeanOf(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  int n = 0;
  for (const auto& v : values) {
    if (!v.has_value()) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

ProceduralReport AggregateProcedural(
    std::string model, GameKind game,
    const std::vector<SessionProcedural>& per_session,
    const std::vector<const Session*>& sessions) {
  ProceduralReport report;
  report.model = std::move(model);
  report.game = game;
  report.sessions = static_cast<int>(per_session.size());
  std::vector<std::optional<double>> recall, top5, top10, disparity, first,
      final_rank, spearman, hopping;
  auto opt = [](const std::optional<int>& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  for (const SessionProcedural& sp : per_session) {
    report.flagged_entries += sp.flagged_entries;
    if (sp.recall) {
      recall.push_back(sp.recall->recall);
      top5.push_back(sp.recall->top5_recall);
      top10.push_back(sp.recall->top10_recall);
      if (!sp.final_rank) ++report.final_rank_missing;
    }
    disparity.push_back(sp.disparity);
    spearman.push_back(sp.spearman);
    hopping.push_back(sp.hopping);
    if (game == GameKind::kBluffing) {
      first.push_back(opt(sp.first_correct_round));
      final_rank.push_back(opt(sp.bluffing_final_rank));
    } else {
      first.push_back(opt(sp.first_appear_round));
      final_rank.push_back(opt(sp.final_rank));
    }
  }
  report.recall_rate = MeanOf(recall);
  report.top5_recall = MeanOf(top5);
  report.top10_recall = MeanOf(top10);
  report.disparity_ratio = MeanOf(disparity);
  report.avg_first_appear_round = MeanOf(first);
  report.avg_final_rank = MeanOf(final_rank);
  report.spearman_rho = MeanOf(spearman);
  report.hopping_penalty = MeanOf(hopping);
  if (game == GameKind::kBluffing) {
    BluffingRecall br = BluffingRecallRate(sessions);
    report.bluffing_recall = br.recall;
    report.no_verdict_rate = br.no_verdict_rate;
  }
  return report;
}

std::vector<SubsetComparison> CompareSubsets(
    const std::vector<TaggedSession>& corpus, const std::string& tag_a,
    const std::string& tag_b) {
  std::set<std::string> seen_tags;
  std::map<std::tuple<std::string, GameKind>,
           std::pair<std::vector<const Session*>, std::vector<const Session*>>>
      groups;
  for (const TaggedSession& t : corpus) {
    if (!t.tag.has_value()) continue;
    seen_tags.insert(*t.tag);
    if (*t.tag != tag_a && *t.tag != tag_b) continue;
    auto& group = groups[{t.session->model_ref, t.session->game()}];
    (*t.tag == tag_a ? group.first : group.second).push_back(t.session);
  }
  std::string missing;
  for (const std::string& tag : {tag_a, tag_b}) {
    if (!seen_tags.contains(tag)) {
      missing += (missing.empty() ? "" : ", ") + tag;
    }
  }
  if (!missing.empty()) {
    throw MetricError("no sessions carry subset tag(s): " + missing);
  }
  auto report_of = [](const std::vector<const Session*>& s)
      -> std::optional<OutcomeReport> {
    for (const Session* x : s) {
      if (HasOutcome(*x)) return OutcomeMetrics(s);
    }
    return std::nullopt;
  };
  std::vector<SubsetComparison> out;
  for (const auto& [key, group] : groups) {
    SubsetComparison c;
    c.model = std::get<0>(key);
    c.game = std::get<1>(key);
    c.a = report_of(group.first);
    c.b = report_of(group.second);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace playbench::metrics
