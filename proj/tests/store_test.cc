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

#include "playbench/store/store.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "support/corpus.h"

namespace playbench::store {
namespace {

namespace fs = std::filesystem;
using game::GameKind;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("playbench-store-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter_++));
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const testing::Corpus& SharedCorpus() {
  static const testing::Corpus corpus = testing::SimulatedCorpus(90, 31);
  return corpus;
}

game::Session Sample(GameKind game, std::string id, std::int64_t created,
                     bool finished = true) {
  game::Session s;
  s.session_id = std::move(id);
  s.config = game::GameConfig::Defaults(game, {"apple"});
  s.model_ref = "m";
  s.prompt_ref = "p";
  s.system_prompt = "sys";
  s.created_at_ms = created;
  s.turns.push_back({1, game::Role::kUser, "héllo \"quoted\"\n\ttab"});
  if (finished) {
    s.status = game::SessionStatus::kUserWon;
    s.phase = game::Phase::kFinished;
    game::Outcome o;
    o.rounds = 1;
    o.user_feedback = game::Feedback::kConfirmedIncorrect;
    s.outcome = o;
  }
  return s;
}

// ----------------------------------------------------------- round trips

TEST(SerializeTest, SimulatedSessionsRoundTrip) {
  for (const auto& r : SharedCorpus().records) {
    EXPECT_EQ(SessionFromJson(ToJson(r.session)), r.session) << r.session.session_id;
    EXPECT_EQ(RecordFromJson(RecordToJson(r)), r);
    // Through text as well.
    EXPECT_EQ(SessionFromJson(Json::parse(ToJson(r.session).dump())), r.session);
  }
  for (const auto& t : SharedCorpus().traces) {
    EXPECT_EQ(TraceFromJson(Json::parse(ToJson(t).dump())), t);
  }
}

TEST(SerializeTest, OptionalFieldsRoundTrip) {
  game::Session s = Sample(GameKind::kTaboo, "x", 5);
  s.secret.text = "apple";
  s.uttered_round = 2;
  s.rule_winner = game::Winner::kModel;
  s.pending_prediction = game::Prediction::Guess(GameKind::kTaboo, "pear");
  s.inference_params.seed = 42;
  s.config.keyword_match = game::KeywordMatch::kSubstring;
  s.outcome->rule_violation = "user said the word";
  s.outcome->revealed_secret = "apple";
  game::Turn t{1, game::Role::kModel, "My guess of the word is: pear",
               game::TurnKind::kPrediction};
  t.prediction = s.pending_prediction;
  t.uttered_secret = true;
  s.turns.push_back(t);
  EXPECT_EQ(SessionFromJson(Json::parse(ToJson(s).dump())), s);
}

TEST(SerializeTest, UtcDates) {
  EXPECT_EQ(UtcDate(1725148800000), "2024-09-01");
  EXPECT_EQ(UtcDate(1725148800000 - 1), "2024-08-31");
  EXPECT_EQ(UtcTimestamp(0), "1970-01-01T00:00:00.000Z");
}

// --------------------------------------------------------------- store

TEST(StoreTest, AppendLoadAndOrdering) {
  TempDir dir;
  SessionStore s(dir.path());
  s.Append(SessionRecord::For(Sample(GameKind::kAkinator, "b", 2000)));
  s.Append(SessionRecord::For(Sample(GameKind::kBluffing, "a", 2000)));
  s.Append(SessionRecord::For(Sample(GameKind::kTaboo, "c", 1000)));
  std::vector<std::string> ids;
  for (const auto& r : s.Load()) ids.push_back(r.session.session_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_TRUE(s.Contains("a"));
  EXPECT_FALSE(s.Get("zzz").has_value());

  auto files = s.Files();
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files[0], fs::path("sessions/akinator/1970-01-01.log"));

  SessionStore reopened(dir.path());
  EXPECT_EQ(reopened.Load(), s.Load());
  EXPECT_EQ(reopened.Digest(), s.Digest());
}

TEST(StoreTest, DuplicatesAreRejectedAcrossReopen) {
  TempDir dir;
  {
    SessionStore s(dir.path());
    s.Append(SessionRecord::For(Sample(GameKind::kAkinator, "a", 1)));
  }
  SessionStore s(dir.path());
  try {
    s.Append(SessionRecord::For(Sample(GameKind::kAkinator, "a", 1)));
    FAIL();
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreError::Kind::kDuplicate);
  }
}

TEST(StoreTest, InvalidRecordsAreRejected) {
  TempDir dir;
  SessionStore s(dir.path());
  SessionRecord r = SessionRecord::For(Sample(GameKind::kAkinator, "a", 1));
  r.schema_version = 99;
  try {
    s.Append(r);
    FAIL();
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreError::Kind::kSchema);
  }
  EXPECT_TRUE(s.Load().empty());
}

TEST(StoreTest, CorrectionsAppendWithoutRewriting) {
  TempDir dir;
  SessionStore s(dir.path());
  s.Append(SessionRecord::For(Sample(GameKind::kAkinator, "a", 1)));
  s.Append(SessionRecord::For(Sample(GameKind::kAkinator, "b", 2)));
  const fs::path log = dir.path() / "sessions/akinator/1970-01-01.log";
  const std::string before = Slurp(log);

  SessionRecord fix = SessionRecord::For(Sample(GameKind::kAkinator, "a", 1));
  fix.aliases = {"granny smith"};
  EXPECT_EQ(s.AppendCorrection(fix), 1);
  EXPECT_EQ(s.AppendCorrection(fix), 2);
  const std::string after = Slurp(log);
  EXPECT_EQ(after.compare(0, before.size(), before), 0);
  EXPECT_GT(after.size(), before.size());

  auto history = s.History("a");
  ASSERT_EQ(history.size(), 3u);
  EXPECT_EQ(history[0].revision, 0);
  EXPECT_EQ(history[2].revision, 2);
  auto latest = s.Get("a");
  ASSERT_TRUE(latest.has_value());
  EXPECT_EQ(latest->aliases, fix.aliases);
  EXPECT_EQ(s.Load().size(), 2u);

  SessionRecord ghost = SessionRecord::For(Sample(GameKind::kAkinator, "ghost", 1));
  try {
    s.AppendCorrection(ghost);
    FAIL();
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreError::Kind::kNotFound);
  }
}

TEST(StoreTest, EveryAppendOnlyExtendsFiles) {
  TempDir dir;
  SessionStore s(dir.path());
  std::map<fs::path, std::string> seen;
  for (const auto& r : SharedCorpus().records) {
    s.Append(r);
    for (const auto& f : s.Files()) {
      const std::string now = Slurp(dir.path() / f);
      auto it = seen.find(f);
      if (it != seen.end()) {
        ASSERT_EQ(now.compare(0, it->second.size(), it->second), 0) << f;
      }
      seen[f] = now;
    }
  }
  EXPECT_EQ(s.Load().size(), SharedCorpus().records.size());
}

TEST(StoreTest, TracesReplaceEarlierAppends) {
  TempDir dir;
  SessionStore s(dir.path());
  s.Append(SessionRecord::For(Sample(GameKind::kBluffing, "a", 1)));
  retro::RetroTrace t;
  t.session_id = "a";
  t.game = GameKind::kBluffing;
  t.model_ref = "m";
  retro::RetroEntry e;
  e.round = 0;
  e.failed = true;
  e.error = "timeout";
  t.entries.push_back(e);
  s.AppendTrace(t);
  t.entries[0] = retro::RetroEntry{};
  t.entries[0].raw = "True";
  t.entries[0].judgment = retro::Judgment{1};
  s.AppendTrace(t);
  auto traces = s.LoadTraces();
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_EQ(traces[0], t);
  EXPECT_EQ(s.GetTrace("a"), t);
  EXPECT_TRUE(s.LoadTraces(GameKind::kTaboo).empty());
}

// ---------------------------------------------------------------- filters

TEST(FilterTest, EachFieldNarrowsTheCorpus) {
  TempDir dir;
  SessionStore s(dir.path());
  for (const auto& r : SharedCorpus().records) s.Append(r);
  const auto all = s.Load();
  auto check = [&](const CorpusFilter& f, auto pred) {
    std::vector<std::string> want, got;
    for (const auto& r : all) {
      if (pred(r)) want.push_back(r.session.session_id);
    }
    for (const auto& r : s.Load(f)) got.push_back(r.session.session_id);
    EXPECT_EQ(got, want);
    EXPECT_FALSE(want.empty());
  };
  CorpusFilter f;
  f.game = GameKind::kTaboo;
  check(f, [](const SessionRecord& r) { return r.session.game() == GameKind::kTaboo; });
  f = {};
  f.model = all.front().session.model_ref;
  check(f, [&](const SessionRecord& r) { return r.session.model_ref == *f.model; });
  f = {};
  f.prompt = all.front().session.prompt_ref;
  check(f, [&](const SessionRecord& r) { return r.session.prompt_ref == *f.prompt; });
  f = {};
  f.subset_tag = "set2";
  check(f, [](const SessionRecord& r) { return r.subset_tag == "set2"; });
  f = {};
  f.completeness = Completeness::kCompleteWithFeedback;
  check(f, [](const SessionRecord& r) {
    return r.completeness == Completeness::kCompleteWithFeedback;
  });
  f = {};
  const std::int64_t mid = all[all.size() / 2].session.created_at_ms;
  f.from_ms = mid;
  f.to_ms = mid + 10 * 60000;
  check(f, [&](const SessionRecord& r) {
    return r.session.created_at_ms >= mid && r.session.created_at_ms < mid + 600000;
  });
}

TEST(UsefulDataTest, ThirteenOfFifteen) {
  std::vector<SessionRecord> records;
  for (int i = 0; i < 15; ++i) {
    game::Session s = Sample(GameKind::kAkinator, std::to_string(i), i, i < 13);
    if (i >= 13) s.status = game::SessionStatus::kAbandoned;
    records.push_back(SessionRecord::For(s));
  }
  EXPECT_NEAR(*UsefulDataRate(records), 13.0 / 15.0, 1e-15);
  EXPECT_FALSE(UsefulDataRate({}).has_value());
  EXPECT_EQ(records[0].completeness, Completeness::kCompleteWithFeedback);
  EXPECT_EQ(records[14].completeness, Completeness::kIncomplete);
}

// ----------------------------------------------------------------- bundles

TEST(BundleTest, ExportImportRoundTrip) {
  TempDir a, b;
  SessionStore src(a.path());
  for (const auto& r : SharedCorpus().records) src.Append(r);
  for (const auto& t : SharedCorpus().traces) src.AppendTrace(t);
  Json bundle = ExportBundle(src);

  SessionStore dst(b.path());
  ImportStats stats = ImportBundle(dst, Json::parse(bundle.dump()));
  EXPECT_EQ(stats.sessions, static_cast<int>(SharedCorpus().records.size()));
  EXPECT_EQ(stats.traces, static_cast<int>(SharedCorpus().traces.size()));
  EXPECT_EQ(dst.Load(), src.Load());
  EXPECT_EQ(dst.LoadTraces(), src.LoadTraces());

  ImportStats again = ImportBundle(dst, bundle);
  EXPECT_EQ(again.sessions, 0);
  EXPECT_EQ(again.traces, 0);
  EXPECT_EQ(again.skipped_identical, stats.sessions + stats.traces);
  EXPECT_EQ(dst.Load(), src.Load());
}

TEST(BundleTest, FilteredExport) {
  TempDir a;
  SessionStore src(a.path());
  for (const auto& r : SharedCorpus().records) src.Append(r);
  CorpusFilter f;
  f.game = GameKind::kBluffing;
  Json bundle = ExportBundle(src, f);
  for (const auto& j : bundle["sessions"]) {
    EXPECT_EQ(RecordFromJson(j).session.game(), GameKind::kBluffing);
  }
  EXPECT_EQ(bundle["sessions"].size(), src.Load(f).size());
}

TEST(BundleTest, ConflictsAndSchema) {
  TempDir a, b;
  SessionStore src(a.path());
  src.Append(SessionRecord::For(Sample(GameKind::kAkinator, "a", 1)));
  Json bundle = ExportBundle(src);

  SessionStore dst(b.path());
  game::Session other = Sample(GameKind::kAkinator, "a", 1);
  other.model_ref = "different";
  dst.Append(SessionRecord::For(other));
  try {
    ImportBundle(dst, bundle);
    FAIL();
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreError::Kind::kDuplicate);
  }
  bundle["schema_version"] = 7;
  try {
    ImportBundle(dst, bundle);
    FAIL();
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreError::Kind::kSchema);
  }
}

}  // namespace
}  // namespace playbench::store
