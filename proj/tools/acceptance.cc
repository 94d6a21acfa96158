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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any check fails.

#include <sys/wait.h>

#include <array>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "playbench/metrics/metrics.h"
#include "playbench/ranking/ranking.h"
#include "playbench/sim/analysis.h"
#include "playbench/sim/fixture.h"
#include "support/corpus.h"
#include "support/game_fuzz.h"
#include "support/metric_oracle.h"

namespace playbench::acceptance {
namespace {

namespace fs = std::filesystem;
using ranking::Ranking;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  std::array<char, 1024> buf;
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf.data(), buf.size(), format, args);
  va_end(args);
  return buf.data();
}

ranking::RankingFixture Rankings() {
  return ranking::LoadFixture(testing::AssetsDir() + "/fixtures/rankings_sep2024.json");
}

Verdict Correlations() {
  auto f = Rankings();
  const double t1 = ranking::KendallTau(f.Get("akinator-outcome"), f.Get("chatbot-arena"));
  const double r1 = ranking::Rbo(f.Get("akinator-outcome"), f.Get("chatbot-arena"));
  const double t2 = ranking::KendallTau(f.Get("akinator-retro"), f.Get("livebench-reasoning"));
  const double r2 = ranking::Rbo(f.Get("akinator-retro"), f.Get("livebench-reasoning"));
  const bool ok = std::fabs(t1 - 0.4) < 1e-12 && std::fabs(r1 - 0.855) <= 0.0005 &&
                  std::fabs(t2 - 0.8) < 1e-12 && std::fabs(r2 - 0.973) <= 0.0005;
  return {ok, Fmt("akinator-outcome/chatbot-arena tau=%.4f rbo=%.4f; "
                  "akinator-retro/livebench-reasoning tau=%.4f rbo=%.4f",
                  t1, r1, t2, r2)};
}

Verdict ZTests() {
  const double taus[] = {-0.2, 0.2, 0.4, 0.6, 0.8};
  const double want[] = {0.7365, 0.2635, 0.1038, 0.0287, 0.0057};
  bool ok = true;
  std::string d;
  for (int i = 0; i < 5; ++i) {
    const double p = ranking::TauZTest(taus[i], 5).p_value;
    ok &= std::fabs(p - want[i]) <= 0.002;
    d += Fmt("%s%+.1f->%.4f", i ? " " : "", taus[i], p);
  }
  return {ok, "n=5 one-tailed p: " + d};
}

Verdict Permutations() {
  auto f = Rankings();
  ranking::PermutationOptions exhaustive;
  exhaustive.exhaustive = true;
  const Ranking& a = f.Get("akinator-outcome");
  const auto identical = ranking::RboPermutationTest(a, a, exhaustive);
  bool ok = identical.at_least == 1 && identical.trials == 120;

  std::vector<std::pair<std::string, std::string>> pairs;
  for (const char* g : {"akinator", "taboo", "bluffing"}) {
    for (const char* fam : {"-outcome", "-retro"}) {
      for (const char* b : {"chatbot-arena", "livebench-reasoning", "gpqa"}) {
        pairs.emplace_back(std::string(g) + fam, b);
      }
    }
  }
  pairs.emplace_back("akinator-outcome", "livebench-language");
  pairs.emplace_back("taboo-outcome", "livebench-language");
  int agree = 0;
  std::uint64_t seed = 1000;
  for (const auto& [x, y] : pairs) {
    auto [r1, r2] = ranking::RestrictToCommon(f.Get(x), f.Get(y));
    const double exact = ranking::RboPermutationTest(r1, r2, exhaustive).p_value;
    ranking::PermutationOptions sampled;
    sampled.seed = seed++;
    const double est = ranking::RboPermutationTest(r1, r2, sampled).p_value;
    agree += std::fabs(est - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / 1000.0);
  }
  ok &= agree == static_cast<int>(pairs.size());
  return {ok, Fmt("identical p=%ld/%ld; sampled within 3 SE on %d/%zu pairs",
                  identical.at_least, identical.trials, agree, pairs.size())};
}

Verdict OracleEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  testing::Corpus c = testing::SimulatedCorpus(200, 20260901);
  const sim::Ontology& ontology = c.platform.assets->ontology;
  metrics::Classifier classifier = ontology.AsClassifier();
  sim::CorpusAnalysis a = sim::Analyze(c.records, c.traces, &classifier);
  auto mismatches = oracle::Compare(a, oracle::Compute(c.records, c.traces, ontology));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {mismatches.empty() && secs < 30.0 && !a.procedural.empty(),
          Fmt("200 sessions, %zu outcome + %zu procedural rows, %zu mismatches, %.2fs",
              a.outcome.size(), a.procedural.size(), mismatches.size(), secs) +
              (mismatches.empty() ? "" : " first: " + mismatches.front())};
}

Verdict SpotChecks() {
  const double rho = metrics::SpearmanConsistency({4, 4, 2, 2, 1}, 1);
  const double hop = metrics::HoppingPenalty({4, 4, 2, 2, 1});
  const double disp = metrics::DisparityRatio(8, 2, 10);
  const bool ok = std::fabs(rho + 1.15) < 1e-12 && std::fabs(hop - 0.75) < 1e-12 &&
                  std::fabs(disp - 0.6) < 1e-12;
  return {ok, Fmt("spearman=%.4f hopping=%.4f disparity=%.4f", rho, hop, disp)};
}

Verdict Invariants() {
  bool ok = true;
  std::string d;
  const game::GameKind games[] = {game::GameKind::kAkinator, game::GameKind::kTaboo,
                                  game::GameKind::kBluffing};
  for (int i = 0; i < 3; ++i) {
    testing::FuzzReport r = testing::FuzzGame(games[i], i + 1);
    ok &= r.violations == 0 && r.sequences == 10000;
    d += Fmt("%s%s %ld seq/%ld violations", i ? "; " : "",
             std::string(game::GameName(games[i])).c_str(), r.sequences, r.violations);
    if (r.violations) d += " (" + r.first_violation + ")";
  }
  return {ok, d};
}

Verdict Fixtures() {
  const sim::Platform platform = testing::LoadShippedPlatform();
  auto load = [](const std::string& n) {
    return sim::TranscriptFixture::FromFile(testing::AssetsDir() +
                                            "/fixtures/transcript_" + n + ".json");
  };
  auto ak = sim::ReplayFixture(load("akinator"), platform, "a");
  auto tb = sim::ReplayFixture(load("taboo"), platform, "t");
  auto bl = sim::ReplayFixture(load("bluffing"), platform, "b");
  const auto& as = ak.result.session;
  const auto& ts = tb.result.session;
  const auto& bs = bl.result.session;
  bool ok = as.status == game::SessionStatus::kModelWon && as.outcome &&
            as.outcome->rounds == 15;
  int lists = 0;
  for (const auto& e : ak.trace.entries) lists += e.list && !e.list->unparseable;
  ok &= lists == static_cast<int>(ak.trace.entries.size()) && lists > 0;
  std::string guess;
  for (const auto& t : ts.turns) {
    if (t.prediction) guess = t.prediction->text();
  }
  ok &= ts.status == game::SessionStatus::kModelWon && ts.outcome &&
        ts.outcome->rounds == 4 && guess == "SAMOA";
  const bool verdict = !bs.turns.empty() && bs.turns.back().prediction &&
                       bs.turns.back().prediction->verdict();
  const auto judgments = metrics::TraceJudgments(bl.trace);
  ok &= bs.status == game::SessionStatus::kModelWon && verdict &&
        judgments == std::vector<int>{4, 4, 2, 2, 1};
  return {ok, Fmt("akinator %s in %d rounds, %d lists; taboo %s in %d rounds guessing %s; "
                  "bluffing verdict %s, %zu judgments",
                  std::string(game::StatusName(as.status)).c_str(),
                  as.outcome ? as.outcome->rounds : -1, lists,
                  std::string(game::StatusName(ts.status)).c_str(),
                  ts.outcome ? ts.outcome->rounds : -1, guess.c_str(),
                  verdict ? "True" : "missing", judgments.size())};
}

int Exec(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (!fs::exists(root)) return files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), root).string()] = s.str();
  }
  return files;
}

Verdict Determinism() {
  const fs::path dir = fs::temp_directory_path() /
                       ("playbench-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  int codes = 0;
  for (const char* name : {"a", "b"}) {
    codes += Exec(std::string("'") + PLAYBENCH_CLI + "' --config '" +
                  testing::AssetsDir() + "/config.json' --store '" +
                  (dir / name).string() + "' simulate --n 50 --seed 1 >/dev/null 2>&1");
  }
  auto a = Snapshot(dir / "a"), b = Snapshot(dir / "b");
  std::size_t bytes = 0;
  for (const auto& [k, v] : a) bytes += v.size();
  fs::remove_all(dir);
  return {codes == 0 && !a.empty() && a == b,
          Fmt("two runs, %zu files, %zu bytes, %s", a.size(), bytes,
              a == b ? "identical" : "different")};
}

Verdict LiveTables() {
  return {true,
          "informational: live-model win-rate and recall tables need the "
          "original human sessions and remote models; not reproducible offline"};
}

}  // namespace
}  // namespace playbench::acceptance

int main() {
  using namespace playbench::acceptance;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> checks = {
      {"C1 ranking agreement on shipped fixture", Correlations},
      {"C2 tau z-test p-values", ZTests},
      {"C3 RBO permutation test", Permutations},
      {"C4 metrics match exact oracle", OracleEquivalence},
      {"C5 metric spot checks", SpotChecks},
      {"C6 random action sequences keep invariants", Invariants},
      {"C7 transcript fixtures replay", Fixtures},
      {"C8 simulate is byte-deterministic", Determinism},
      {"C9 live-model tables", LiveTables},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s  %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
