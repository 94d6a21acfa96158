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

#include <chrono>
#include <cmath>
#include <set>

#include <boost/rational.hpp>
#include <gtest/gtest.h>

#include "playbench/game/random.h"
#include "playbench/sim/analysis.h"
#include "support/corpus.h"
#include "support/metric_oracle.h"

namespace playbench::metrics {
namespace {

using game::GameKind;
using game::Role;
using game::Session;
using Q = boost::rational<long long>;

double D(Q q) { return boost::rational_cast<double>(q); }

retro::RetroEntry ListEntry(int round, std::vector<std::string> items) {
  retro::RetroEntry e;
  e.round = round;
  e.list = retro::RankedList{std::move(items)};
  return e;
}

retro::RetroEntry JudgmentEntry(int round, int level) {
  retro::RetroEntry e;
  e.round = round;
  e.judgment = retro::Judgment{level};
  return e;
}

Session Finished(GameKind game, std::string model, std::string prompt,
                 bool model_won, int rounds) {
  Session s;
  s.session_id = model + prompt + std::to_string(rounds) +
                 (model_won ? "w" : "l");
  s.config = game::GameConfig::Defaults(game, {"word"});
  s.model_ref = std::move(model);
  s.prompt_ref = std::move(prompt);
  for (int i = 1; i <= rounds; ++i) {
    s.turns.push_back({i, Role::kModel, "Question " + std::to_string(i) + ": x?"});
    s.turns.push_back({i, Role::kUser, "No"});
  }
  s.round_count = rounds;
  s.status = model_won ? game::SessionStatus::kModelWon
                       : game::SessionStatus::kUserWon;
  s.phase = game::Phase::kFinished;
  game::Outcome o;
  o.winner = model_won ? game::Winner::kModel : game::Winner::kUser;
  o.win_indicator = model_won ? 1 : 0;
  o.rounds = rounds;
  s.outcome = o;
  return s;
}

// ------------------------------------------------------------ spot checks

TEST(SpotCheckTest, SpearmanOfWorkedExample) {
  EXPECT_NEAR(SpearmanConsistency({4, 4, 2, 2, 1}, 1), -1.15, 1e-12);
}

TEST(SpotCheckTest, HoppingOfWorkedExample) {
  EXPECT_NEAR(HoppingPenalty({4, 4, 2, 2, 1}), 0.75, 1e-12);
}

TEST(SpotCheckTest, DisparityEightTwoOfTen) {
  EXPECT_NEAR(DisparityRatio(8, 2, 10), 0.6, 1e-12);
}

TEST(SpotCheckTest, DisparityFromPartition) {
  std::vector<std::string> items;
  for (int i = 0; i < 10; ++i) items.push_back("o" + std::to_string(i));
  Classifier c = [](std::string_view, std::string_view item)
      -> std::optional<bool> { return item < "o8"; };
  PartitionResult p = PartitionObjects("is it alive?", items, c);
  EXPECT_EQ(p.size_yes(), 8);
  EXPECT_EQ(p.size_no(), 2);
  EXPECT_FALSE(p.flagged);
  EXPECT_NEAR(DisparityRatio(p), 0.6, 1e-12);
}

// --------------------------------------------------- formula properties

// Spearman straight from the definition in exact arithmetic.
Q SpearmanRef(const std::vector<int>& j, int g) {
  const long long n = static_cast<long long>(j.size());
  long long sum = 0;
  for (long long i = 1; i <= n; ++i) {
    const long long d = i - std::abs(j[i - 1] - g);
    sum += d * d;
  }
  return Q(1) - Q(6 * sum, n * (n * n - 1));
}

TEST(JudgmentMetricTest, RandomSequencesMatchExactFormulas) {
  rng::Engine e(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng::UniformIndex(e, 10));
    std::vector<int> j;
    for (int i = 0; i < n; ++i) j.push_back(1 + static_cast<int>(rng::UniformIndex(e, 5)));
    const int g = rng::Bernoulli(e, 0.5) ? 1 : 5;
    EXPECT_NEAR(SpearmanConsistency(j, g), D(SpearmanRef(j, g)), 1e-12);
    long long steps = 0;
    for (int i = 1; i < n; ++i) steps += std::abs(j[i] - j[i - 1]);
    const double hop = HoppingPenalty(j);
    EXPECT_NEAR(hop, D(Q(steps, n - 1)), 1e-12);
    EXPECT_GE(hop, 0.0);
    EXPECT_LE(hop, 4.0);
    auto ff = BluffingFirstAndFinalRank(j, g);
    EXPECT_EQ(ff.final_rank, std::abs(j.back() - g));
    EXPECT_GE(ff.final_rank, 0);
    EXPECT_LE(ff.final_rank, 4);
    if (ff.first_correct_round) {
      EXPECT_EQ(j[*ff.first_correct_round - 1], g);
      for (int i = 0; i + 1 < *ff.first_correct_round; ++i) EXPECT_NE(j[i], g);
    } else {
      for (int v : j) EXPECT_NE(v, g);
    }
  }
}

TEST(JudgmentMetricTest, ConstantCorrectJudgmentsScoreOneForTwoRounds) {
  // d_i = i - 0, so rho = 1 - 6 * 5 / 6 = -4 for N = 2: the formula is
  // taken as written.
  EXPECT_NEAR(SpearmanConsistency({1, 1}, 1), -4.0, 1e-12);
  EXPECT_NEAR(HoppingPenalty({1, 1}), 0.0, 0.0);
}

TEST(JudgmentMetricTest, TraceJudgmentsSkipStatementAndBadEntries) {
  retro::RetroTrace t;
  t.game = GameKind::kBluffing;
  t.entries.push_back(JudgmentEntry(0, 3));
  for (int level : {4, 4, 2}) {
    t.entries.push_back(JudgmentEntry(static_cast<int>(t.entries.size()), level));
  }
  retro::RetroEntry bad = JudgmentEntry(4, 5);
  bad.judgment->unparseable = true;
  t.entries.push_back(bad);
  retro::RetroEntry failed;
  failed.round = 5;
  failed.failed = true;
  t.entries.push_back(failed);
  t.entries.push_back(JudgmentEntry(6, 1));
  EXPECT_EQ(TraceJudgments(t), (std::vector<int>{4, 4, 2, 1}));
}

TEST(JudgmentMetricTest, ShortSequencesThrow) {
  EXPECT_THROW(SpearmanConsistency({3}, 1), MetricError);
  EXPECT_THROW(HoppingPenalty({3}), MetricError);
  EXPECT_THROW(SpearmanConsistency({3, 9}, 1), MetricError);
}

TEST(DisparityTest, RandomCountsMatchExactRatio) {
  rng::Engine e(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int size = 1 + static_cast<int>(rng::UniformIndex(e, 30));
    const int yes = static_cast<int>(rng::UniformIndex(e, size + 1));
    const int no = static_cast<int>(rng::UniformIndex(e, size - yes + 1));
    const double r = DisparityRatio(yes, no, size);
    EXPECT_NEAR(r, D(Q(std::abs(yes - no), size)), 1e-15);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
  EXPECT_THROW(DisparityRatio(0, 0, 0), MetricError);
}

TEST(DisparityTest, AllUnclassifiableIsFlagged) {
  Classifier none = [](std::string_view, std::string_view)
      -> std::optional<bool> { return std::nullopt; };
  PartitionResult p = PartitionObjects("q?", {"a", "b"}, none);
  EXPECT_TRUE(p.flagged);
  EXPECT_EQ(p.unclassifiable, 2);
}

// ----------------------------------------------------------------- recall

TEST(RecallTest, HandBuiltTrace) {
  retro::RetroTrace t;
  t.game = GameKind::kAkinator;
  std::vector<std::string> filler;
  for (int i = 0; i < 12; ++i) filler.push_back("thing" + std::to_string(i));
  auto at = [&](int rank) {
    std::vector<std::string> v = filler;
    v.insert(v.begin() + rank - 1, "Pianos");
    return v;
  };
  t.entries.push_back(ListEntry(1, filler));
  t.entries.push_back(ListEntry(2, at(7)));
  t.entries.push_back(ListEntry(3, at(3)));
  retro::RetroEntry failed;
  failed.round = 4;
  failed.failed = true;
  t.entries.push_back(failed);
  t.entries.push_back(ListEntry(5, at(12)));

  Recall r = RecallRates(t, "a piano");
  EXPECT_EQ(r.lists, 4);
  EXPECT_EQ(r.containing, 3);
  EXPECT_EQ(r.top5, 1);
  EXPECT_EQ(r.top10, 2);
  EXPECT_NEAR(r.recall, 0.75, 1e-15);
  EXPECT_NEAR(r.top5_recall, 0.25, 1e-15);
  EXPECT_NEAR(r.top10_recall, 0.5, 1e-15);

  FirstAndFinal ff = FirstAppearAndFinalRank(t, "piano");
  EXPECT_EQ(ff.first_appear_round, 2);
  EXPECT_EQ(ff.final_rank, 12);
}

TEST(RecallTest, AliasesCount) {
  EXPECT_TRUE(MatchesSecret("The Grand Piano", "piano", {"grand piano"}));
  EXPECT_FALSE(MatchesSecret("Grand Piano", "piano"));
  EXPECT_EQ(RankOf({"x", "cellos", "cello"}, "the cello"), 2);
}

TEST(RecallTest, NoUsableListThrows) {
  retro::RetroTrace t;
  retro::RetroEntry e;
  e.round = 1;
  e.list = retro::RankedList{};
  e.list->unparseable = true;
  t.entries.push_back(e);
  EXPECT_THROW(RecallRates(t, "x"), MetricError);
}

TEST(RecallTest, MatchingAgreesWithOracleNormalization) {
  const std::vector<std::string> words = {
      "a", "the", "an", "Piano", "pianos", "grand", "Grand", "box", "boxes",
      "an apple", "apples", "THE", "x-ray", "x", "ray", "café", "cafes"};
  rng::Engine e(3);
  for (int trial = 0; trial < 5000; ++trial) {
    auto phrase = [&] {
      std::string s;
      const int n = 1 + static_cast<int>(rng::UniformIndex(e, 3));
      for (int i = 0; i < n; ++i) {
        if (i > 0) s += rng::Bernoulli(e, 0.2) ? ", " : " ";
        s += words[rng::UniformIndex(e, words.size())];
      }
      return s;
    };
    const std::string a = phrase(), b = phrase();
    EXPECT_EQ(MatchesSecret(a, b), oracle::SameName(a, b)) << a << " | " << b;
  }
}

// --------------------------------------------------------------- outcome

TEST(OutcomeTest, WinRateRoundsAndPromptSpread) {
  std::vector<Session> s = {
      Finished(GameKind::kAkinator, "m", "p1", true, 10),
      Finished(GameKind::kAkinator, "m", "p1", false, 20),
      Finished(GameKind::kAkinator, "m", "p2", true, 4),
  };
  Session abandoned = Finished(GameKind::kAkinator, "m", "p2", true, 3);
  abandoned.status = game::SessionStatus::kAbandoned;
  abandoned.outcome.reset();
  std::vector<const Session*> ptrs = {&s[0], &s[1], &s[2], &abandoned};
  OutcomeReport r = OutcomeMetrics(ptrs);
  EXPECT_EQ(r.sessions, 3);
  EXPECT_NEAR(r.avg_win_rate, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.avg_rounds, 34.0 / 3.0, 1e-12);
  // Per prompt: win rates 0.5 and 1, rounds 15 and 4.
  EXPECT_NEAR(r.prompt_win_rate_std, 0.25, 1e-15);
  EXPECT_NEAR(r.prompt_rounds_std, 5.5, 1e-12);
  ASSERT_EQ(r.per_prompt.size(), 2u);
  EXPECT_EQ(r.per_prompt[0].prompt_ref, "p1");
}

TEST(OutcomeTest, RejectsEmptyAndMixedInput) {
  EXPECT_THROW(OutcomeMetrics({}), MetricError);
  Session a = Finished(GameKind::kAkinator, "m1", "p", true, 3);
  Session b = Finished(GameKind::kAkinator, "m2", "p", true, 3);
  EXPECT_THROW(OutcomeMetrics({&a, &b}), MetricError);
}

TEST(OutcomeTest, PopulationStd) {
  EXPECT_DOUBLE_EQ(PopulationStd({2, 4, 4, 4, 5, 5, 7, 9}), 2.0);
  EXPECT_DOUBLE_EQ(PopulationStd({3}), 0.0);
}

TEST(BluffingRecallTest, CountsVerdictsAndSilence) {
  auto bluff = [](bool truthful, std::optional<bool> verdict) {
    Session s = Finished(GameKind::kBluffing, "m", "p", true, 2);
    s.secret.truthful = truthful;
    if (verdict) {
      game::Turn t{3, Role::kModel, "verdict", game::TurnKind::kPrediction};
      t.prediction = game::Prediction::Verdict(*verdict);
      s.turns.push_back(t);
    }
    return s;
  };
  std::vector<Session> s = {bluff(true, true), bluff(false, true),
                            bluff(false, false), bluff(true, std::nullopt)};
  std::vector<const Session*> ptrs;
  for (const auto& x : s) ptrs.push_back(&x);
  BluffingRecall r = BluffingRecallRate(ptrs);
  EXPECT_EQ(r.with_verdict, 3);
  EXPECT_EQ(r.correct, 2);
  EXPECT_EQ(r.no_verdict, 1);
  EXPECT_NEAR(*r.recall, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(*r.no_verdict_rate, 0.25, 1e-15);
}

TEST(SubsetTest, MissingTagsAreNamed) {
  Session a = Finished(GameKind::kTaboo, "m", "p", true, 3);
  std::vector<TaggedSession> corpus = {{&a, "set1"}};
  try {
    CompareSubsets(corpus, "set1", "set9");
    FAIL() << "expected MetricError";
  } catch (const MetricError& e) {
    EXPECT_NE(std::string(e.what()).find("set9"), std::string::npos);
  }
}

TEST(SubsetTest, SplitsByTag) {
  Session a = Finished(GameKind::kTaboo, "m", "p", true, 3);
  Session b = Finished(GameKind::kTaboo, "m", "p", false, 5);
  Session c = Finished(GameKind::kTaboo, "n", "p", false, 5);
  std::vector<TaggedSession> corpus = {{&a, "x"}, {&b, "y"}, {&c, "x"}};
  auto cmp = CompareSubsets(corpus, "x", "y");
  ASSERT_EQ(cmp.size(), 2u);
  EXPECT_EQ(cmp[0].model, "m");
  EXPECT_NEAR(cmp[0].a->avg_win_rate, 1.0, 0.0);
  EXPECT_NEAR(cmp[0].b->avg_win_rate, 0.0, 0.0);
  EXPECT_FALSE(cmp[1].b.has_value());
}

// ------------------------------------------------------ corpus vs oracle

TEST(CorpusOracleTest, SimulatedCorpusMatchesExactReference) {
  const auto start = std::chrono::steady_clock::now();
  testing::Corpus c = testing::SimulatedCorpus(200, 20260901);
  const sim::Ontology& ontology = c.platform.assets->ontology;
  Classifier classifier = ontology.AsClassifier();
  sim::CorpusAnalysis a = sim::Analyze(c.records, c.traces, &classifier);
  oracle::Reference ref = oracle::Compute(c.records, c.traces, ontology);
  for (const auto& m : oracle::Compare(a, ref)) ADD_FAILURE() << m;
  EXPECT_FALSE(a.outcome.empty());
  EXPECT_FALSE(a.procedural.empty());
  std::set<GameKind> games;
  for (const auto& r : a.procedural) games.insert(r.game);
  EXPECT_EQ(games.size(), 3u);
  bool disparity = false, spearman = false, bluff = false, first = false;
  for (const auto& r : a.procedural) {
    disparity |= r.disparity_ratio.has_value();
    spearman |= r.spearman_rho.has_value();
    bluff |= r.bluffing_recall.has_value();
    first |= r.game != GameKind::kBluffing && r.avg_first_appear_round.has_value();
  }
  EXPECT_TRUE(disparity && spearman && bluff && first);
  const double seconds = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 30.0);
}

TEST(CorpusOracleTest, AggregatesStayInRange) {
  testing::Corpus c = testing::SimulatedCorpus(60, 5);
  Classifier classifier = c.platform.assets->ontology.AsClassifier();
  sim::CorpusAnalysis a = sim::Analyze(c.records, c.traces, &classifier);
  for (const auto& r : a.outcome) {
    EXPECT_GE(r.avg_win_rate, 0.0);
    EXPECT_LE(r.avg_win_rate, 1.0);
    EXPECT_GE(r.avg_rounds, 0.0);
  }
  for (const auto& r : a.procedural) {
    if (r.recall_rate) {
      EXPECT_LE(*r.top5_recall, *r.top10_recall);
      EXPECT_LE(*r.top10_recall, *r.recall_rate);
      EXPECT_LE(*r.recall_rate, 1.0);
    }
    if (r.disparity_ratio) {
      EXPECT_GE(*r.disparity_ratio, 0.0);
      EXPECT_LE(*r.disparity_ratio, 1.0);
    }
    if (r.spearman_rho) {
      EXPECT_LE(*r.spearman_rho, 1.0);
    }
    if (r.hopping_penalty) {
      EXPECT_LE(*r.hopping_penalty, 4.0);
    }
  }
}

}  // namespace
}  // namespace playbench::metrics
