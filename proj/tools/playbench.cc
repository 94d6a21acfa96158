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

// playbench: corpus simulation, retrospective replay, metrics, rankings.
//
// Exit codes: 0 success, 1 validation, 2 I/O, 3 remote model failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "playbench/ranking/ranking.h"
#include "playbench/sim/analysis.h"
#include "playbench/sim/assets.h"
#include "playbench/sim/config.h"
#include "playbench/sim/fixture.h"
#include "playbench/sim/runner.h"
#include "playbench/store/serialize.h"
#include "playbench/store/store.h"

#ifndef PLAYBENCH_ASSETS_DIR
#define PLAYBENCH_ASSETS_DIR "assets"
#endif

namespace fs = std::filesystem;
using playbench::store::Json;

namespace playbench::cli {
namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kRemote = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RemoteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string store = "playbench-data";
  std::string config = std::string(PLAYBENCH_ASSETS_DIR) + "/config.json";
};

struct FilterFlags {
  std::string game, model, prompt, subset;
  bool complete_only = false;

  void Attach(CLI::App* app) {
    app->add_option("--game", game, "akinator, taboo or bluffing");
    app->add_option("--model", model, "model id");
    app->add_option("--prompt", prompt, "prompt id");
    app->add_option("--subset", subset, "subset tag");
    app->add_flag("--complete-only", complete_only,
                  "only sessions with outcome feedback");
  }

  store::CorpusFilter Build() const {
    store::CorpusFilter f;
    if (!game.empty()) f.game = game::ParseGameKind(game);
    if (!model.empty()) f.model = model;
    if (!prompt.empty()) f.prompt = prompt;
    if (!subset.empty()) f.subset_tag = subset;
    if (complete_only) f.completeness = store::Completeness::kCompleteWithFeedback;
    return f;
  }
};

void Print(const Json& j) { std::cout << j.dump(2) << "\n"; }

sim::Platform LoadPlatform(const std::string& config_path) {
  if (!fs::exists(config_path)) throw IoError("cannot read " + config_path);
  return sim::Platform::Load(sim::PlatformConfig::FromFile(config_path));
}

Json AnalysisToJson(const sim::CorpusAnalysis& a) {
  Json out = {{"records", a.records},
              {"useful_data_rate", a.useful_data_rate
                                       ? Json(*a.useful_data_rate)
                                       : Json(nullptr)},
              {"outcome", Json::array()},
              {"procedural", Json::array()}};
  for (const auto& r : a.outcome) out["outcome"].push_back(store::ToJson(r));
  for (const auto& r : a.procedural) {
    out["procedural"].push_back(store::ToJson(r));
  }
  return out;
}

sim::CorpusAnalysis AnalyzeStore(const store::SessionStore& s,
                                 const sim::Platform& platform,
                                 const store::CorpusFilter& filter) {
  metrics::Classifier classifier = platform.assets->ontology.AsClassifier();
  return sim::Analyze(s.Load(filter), s.LoadTraces(), &classifier);
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw IoError("cannot write " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// A ranking argument is either a file or an id inside `dir`.
ranking::Ranking ResolveRanking(const std::string& arg, const fs::path& dir) {
  fs::path path = arg;
  if (!fs::is_regular_file(path)) path = dir / (arg + ".json");
  if (!fs::is_regular_file(path)) {
    throw IoError("no ranking file for " + arg + " (looked in " +
                  dir.string() + ")");
  }
  return ranking::RankingFromJson(ReadFile(path));
}

// ------------------------------------------------------------- commands

int Simulate(const Common& common, int n, std::uint64_t seed,
             const std::vector<std::string>& games, bool retro) {
  sim::Platform platform = LoadPlatform(common.config);
  auto gateway = sim::BuildGateway(platform);
  sim::CorpusOptions options;
  options.n = n;
  options.seed = seed;
  if (!games.empty()) {
    options.games.clear();
    for (const auto& g : games) options.games.push_back(game::ParseGameKind(g));
  }
  store::SessionStore s(common.store);
  int abandoned = 0, remote_failures = 0;
  for (auto& cs : sim::SimulateCorpus(platform, *gateway, options)) {
    if (cs.result.session.status == game::SessionStatus::kAbandoned) ++abandoned;
    if (cs.result.remote_failure) ++remote_failures;
    store::SessionRecord record = store::SessionRecord::For(cs.result.session);
    record.subset_tag = cs.subset_tag;
    s.Append(std::move(record));
  }
  Json summary = {{"sessions", n}, {"abandoned", abandoned},
                  {"remote_failures", remote_failures}};
  if (retro) {
    sim::RetroRunStats stats = sim::RunRetroOverStore(
        s, *gateway, platform.config.models, platform.retro_prompts);
    summary["retro"] = {{"replayed", stats.replayed},
                        {"skipped", stats.skipped},
                        {"failed", stats.failed}};
    remote_failures += stats.failed;
  }
  summary["digest"] = s.Digest();
  Print(summary);
  return remote_failures > 0 ? kRemote : kOk;
}

int Retro(const Common& common, const FilterFlags& flags) {
  sim::Platform platform = LoadPlatform(common.config);
  auto gateway = sim::BuildGateway(platform);
  store::SessionStore s(common.store);
  sim::RetroRunStats stats =
      sim::RunRetroOverStore(s, *gateway, platform.config.models,
                             platform.retro_prompts, flags.Build());
  Print({{"replayed", stats.replayed},
         {"skipped", stats.skipped},
         {"failed", stats.failed}});
  return stats.failed > 0 ? kRemote : kOk;
}

int Replay(const Common& common, const std::vector<std::string>& files) {
  sim::Platform platform = LoadPlatform(common.config);
  store::SessionStore s(common.store);
  Json out = Json::array();
  for (const auto& file : files) {
    sim::TranscriptFixture f = sim::TranscriptFixture::FromFile(file);
    sim::FixtureReplay replay =
        sim::ReplayFixture(f, platform, "fixture-" + f.name);
    if (replay.result.error) {
      throw std::invalid_argument(f.name + ": " + *replay.result.error);
    }
    store::SessionRecord record = store::SessionRecord::For(replay.result.session);
    record.aliases = f.aliases;
    s.Append(std::move(record));
    if (!replay.trace.entries.empty()) s.AppendTrace(replay.trace);
    out.push_back({{"session_id", replay.result.session.session_id},
                   {"status", game::StatusName(replay.result.session.status)},
                   {"rounds", replay.result.session.outcome
                                  ? replay.result.session.outcome->rounds
                                  : replay.result.session.round_count}});
  }
  Print(out);
  return kOk;
}

int Metrics(const Common& common, const FilterFlags& flags) {
  sim::Platform platform = LoadPlatform(common.config);
  store::SessionStore s(common.store);
  sim::CorpusAnalysis a = AnalyzeStore(s, platform, flags.Build());
  Json out = AnalysisToJson(a);
  if (a.records == 0) {
    Print(out);
    return kOk;
  }
  Json sessions = Json::object();
  for (const auto& [id, p] : a.per_session) {
    Json j = Json::object();
    if (p.hopping) j["hopping_penalty"] = *p.hopping;
    if (p.spearman) j["spearman_rho"] = *p.spearman;
    if (p.recall) j["recall_rate"] = p.recall->recall;
    if (p.disparity) j["disparity_ratio"] = *p.disparity;
    if (p.first_appear_round) j["first_appear_round"] = *p.first_appear_round;
    if (p.final_rank) j["final_rank"] = *p.final_rank;
    if (p.first_correct_round) j["first_correct_round"] = *p.first_correct_round;
    if (p.bluffing_final_rank) j["bluffing_final_rank"] = *p.bluffing_final_rank;
    sessions[id] = j;
  }
  out["sessions"] = sessions;
  Print(out);
  return kOk;
}

int CompareSubsets(const Common& common, const FilterFlags& flags,
                   const std::string& a, const std::string& b) {
  store::SessionStore s(common.store);
  std::vector<store::SessionRecord> records = s.Load(flags.Build());
  std::vector<metrics::TaggedSession> corpus;
  for (const auto& r : records) corpus.push_back({&r.session, r.subset_tag});
  Json out = Json::array();
  for (const auto& c : metrics::CompareSubsets(corpus, a, b)) {
    out.push_back({{"model", c.model},
                   {"game", game::GameName(c.game)},
                   {a, c.a ? store::ToJson(*c.a) : Json(nullptr)},
                   {b, c.b ? store::ToJson(*c.b) : Json(nullptr)}});
  }
  Print(out);
  return kOk;
}

int Rank(const Common& common, const FilterFlags& flags,
         const std::string& fixtures, const std::string& out_dir) {
  std::vector<ranking::Ranking> rankings;
  if (!fixtures.empty()) {
    fs::path path = fixtures;
    if (!fs::is_regular_file(path)) {
      path = fs::path(PLAYBENCH_ASSETS_DIR) / "fixtures" /
             ("rankings_" + fixtures + ".json");
    }
    if (!fs::is_regular_file(path)) throw IoError("no fixture " + fixtures);
    rankings = ranking::LoadFixture(path.string()).rankings;
  } else {
    sim::Platform platform = LoadPlatform(common.config);
    store::SessionStore s(common.store);
    sim::CorpusAnalysis a = AnalyzeStore(s, platform, flags.Build());
    for (auto& e : sim::BuildLeaderboard(a)) rankings.push_back(e.ranking);
    if (rankings.empty()) {
      throw std::invalid_argument("store holds too little data to rank");
    }
  }
  fs::create_directories(out_dir);
  Json written = Json::array();
  for (const auto& r : rankings) {
    fs::path path = fs::path(out_dir) / (r.id + ".json");
    WriteFile(path, ranking::RankingToJson(r) + "\n");
    written.push_back(path.string());
  }
  Print({{"rankings", written}});
  return kOk;
}

struct CorrelateFlags {
  std::string a, b;
  std::string dir = "rankings";
  std::uint64_t seed = 0;
  bool exhaustive = false;
  double p = ranking::kDefaultPersistence;
  int iterations = 1000;
  std::string variance = "pair-count";
  std::string rbo = "conjoint";
};

int Correlate(const CorrelateFlags& f) {
  ranking::Ranking r1 = ResolveRanking(f.a, f.dir);
  ranking::Ranking r2 = ResolveRanking(f.b, f.dir);
  auto [c1, c2] = ranking::RestrictToCommon(r1, r2);
  ranking::PermutationOptions options;
  options.p = f.p;
  options.seed = f.seed;
  options.iterations = f.iterations;
  options.exhaustive = f.exhaustive;
  options.variant = f.rbo == "truncated" ? ranking::RboVariant::kTruncated
                                         : ranking::RboVariant::kConjoint;
  ranking::TauVariance variance = f.variance == "null"
                                      ? ranking::TauVariance::kNull
                                      : ranking::TauVariance::kPairCount;
  Json out = store::ToJson(ranking::Correlate(c1, c2, options, variance));
  out["models"] = c1.models;
  out["permutation"] = {{"mode", f.exhaustive ? "exhaustive" : "sampled"},
                        {"seed", f.seed},
                        {"iterations", f.exhaustive ? 0 : f.iterations}};
  Print(out);
  return kOk;
}

int Export(const Common& common, const FilterFlags& flags,
           const std::string& out) {
  store::SessionStore s(common.store);
  std::string text = store::ExportBundle(s, flags.Build()).dump() + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    WriteFile(out, text);
  }
  return kOk;
}

int Import(const Common& common, const std::string& file) {
  Json bundle = Json::parse(ReadFile(file), nullptr, false);
  if (bundle.is_discarded()) {
    throw std::invalid_argument(file + " is not a JSON bundle");
  }
  store::SessionStore s(common.store);
  store::ImportStats stats = store::ImportBundle(s, bundle);
  Print({{"sessions", stats.sessions},
         {"traces", stats.traces},
         {"skipped_identical", stats.skipped_identical}});
  return kOk;
}

int Run(int argc, char** argv) {
  CLI::App app{"playbench: game-based model evaluation toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--store", common.store, "session store directory");
  app.add_option("--config", common.config, "platform config file");

  int n = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> games;
  bool with_retro = false;
  auto* simulate = app.add_subcommand("simulate", "generate a simulated corpus");
  simulate->add_option("--n", n, "number of sessions")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "master seed")->required();
  simulate->add_option("--games", games, "games to draw from")->delimiter(',');
  simulate->add_flag("--retro", with_retro, "also run the retrospective");

  FilterFlags filter;
  auto* retro = app.add_subcommand("retro", "run the retrospective over the store");
  filter.Attach(retro);

  std::vector<std::string> fixture_files;
  auto* replay = app.add_subcommand("replay", "store recorded transcripts");
  replay->add_option("files", fixture_files, "transcript fixtures")
      ->required()
      ->check(CLI::ExistingFile);

  auto* metrics_cmd = app.add_subcommand("metrics", "compute metric reports");
  filter.Attach(metrics_cmd);
  std::string tag_a, tag_b;
  auto* compare = metrics_cmd->add_subcommand("compare-subsets",
                                              "outcome metrics per subset tag");
  compare->add_option("a", tag_a, "first subset tag")->required();
  compare->add_option("b", tag_b, "second subset tag")->required();

  std::string fixtures, out_dir = "rankings";
  auto* rank = app.add_subcommand("rank", "write ranking files");
  filter.Attach(rank);
  rank->add_option("--fixtures", fixtures,
                   "published ranking set (sep2024) or fixture file");
  rank->add_option("--out", out_dir, "output directory");

  CorrelateFlags cf;
  auto* correlate = app.add_subcommand("correlate", "compare two rankings");
  correlate->add_option("a", cf.a, "ranking id or file")->required();
  correlate->add_option("b", cf.b, "ranking id or file")->required();
  correlate->add_option("--rankings", cf.dir, "directory of ranking files");
  correlate->add_option("--seed", cf.seed, "permutation test seed")->required();
  correlate->add_flag("--exhaustive", cf.exhaustive, "enumerate all orders");
  correlate->add_option("--p", cf.p, "RBO persistence")
      ->check(CLI::Range(0.0, 1.0));
  correlate->add_option("--iterations", cf.iterations, "sampled permutations")
      ->check(CLI::PositiveNumber);
  correlate->add_option("--variance", cf.variance, "Z-test variance")
      ->check(CLI::IsMember({"pair-count", "null"}));
  correlate->add_option("--rbo", cf.rbo, "RBO variant")
      ->check(CLI::IsMember({"conjoint", "truncated"}));

  std::string out_file;
  auto* export_cmd = app.add_subcommand("export", "write a corpus bundle");
  filter.Attach(export_cmd);
  export_cmd->add_option("--out", out_file, "bundle file, - for stdout");

  std::string in_file;
  auto* import_cmd = app.add_subcommand("import", "load a corpus bundle");
  import_cmd->add_option("bundle", in_file, "bundle file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  if (simulate->parsed()) return Simulate(common, n, seed, games, with_retro);
  if (retro->parsed()) return Retro(common, filter);
  if (replay->parsed()) return Replay(common, fixture_files);
  if (compare->parsed()) return CompareSubsets(common, filter, tag_a, tag_b);
  if (metrics_cmd->parsed()) return Metrics(common, filter);
  if (rank->parsed()) return Rank(common, filter, fixtures, out_dir);
  if (correlate->parsed()) return Correlate(cf);
  if (export_cmd->parsed()) return Export(common, filter, out_file);
  if (import_cmd->parsed()) return Import(common, in_file);
  return kValidation;
}

}  // namespace
}  // namespace playbench::cli

int main(int argc, char** argv) {
  using namespace playbench;
  auto fail = [](int code, const std::string& what) {
    std::cerr << "playbench: " << what << "\n";
    return code;
  };
  try {
    return cli::Run(argc, argv);
  } catch (const gateway::GatewayError& e) {
    return fail(cli::kRemote, e.what());
  } catch (const store::StoreError& e) {
    return fail(e.kind() == store::StoreError::Kind::kIo ? cli::kIo
                                                          : cli::kValidation,
                e.what());
  } catch (const sim::AssetIoError& e) {
    return fail(cli::kIo, e.what());
  } catch (const cli::IoError& e) {
    return fail(cli::kIo, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(cli::kIo, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(cli::kIo, e.what());
  } catch (const std::exception& e) {
    // Schema, ranking, metric and game errors are all input problems.
    return fail(cli::kValidation, e.what());
  }
}
