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

// Model rankings and agreement statistics between two rankings.

#ifndef PLAYBENCH_RANKING_RANKING_H_
#define PLAYBENCH_RANKING_RANKING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "playbench/metrics/metrics.h"

namespace playbench::ranking {

class RankingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultPersistence = 0.9;

struct Ranking {
  std::string id;     // e.g. "akinator-outcome"
  std::string label;  // human readable source
  std::vector<std::string> models;  // rank 1 first
  std::string tie_break_policy;

  // Throws RankingError on duplicates or fewer than two models.
  void Validate() const;
  Ranking Reversed() const;
  bool operator==(const Ranking&) const = default;
};

struct Concordance {
  long concordant = 0;
  long discordant = 0;
};

// Throws RankingError when the model sets differ.
Concordance CountPairs(const Ranking& r1, const Ranking& r2);
double KendallTau(const Ranking& r1, const Ranking& r2);

enum class RboVariant {
  kConjoint,   // truncated sum plus the p^n tail; identical rankings give 1
  kTruncated,  // the finite sum alone
};

double Rbo(const Ranking& r1, const Ranking& r2, double p = kDefaultPersistence,
           RboVariant variant = RboVariant::kConjoint);

enum class TauVariance {
  kPairCount,  // 2 / (n (n - 1))
  kNull,       // 2 (2n + 5) / (9 n (n - 1))
};

struct ZTest {
  double z = 0.0;
  double p_value = 0.0;  // one-tailed, 1 - Phi(z)
};

double NormalCdf(double z);
ZTest TauZTest(double tau, int n, TauVariance variance = TauVariance::kPairCount);

struct PermutationOptions {
  double p = kDefaultPersistence;
  RboVariant variant = RboVariant::kConjoint;
  int iterations = 1000;
  std::uint64_t seed = 0;
  // Enumerate all n! orders instead of sampling. Needs n <= 8.
  bool exhaustive = false;
};

struct PermutationResult {
  double observed = 0.0;
  long at_least = 0;  // null values >= observed
  long trials = 0;
  double p_value = 0.0;
};

// r1 stays fixed; r2 is replaced by uniform random orders of r1's models.
PermutationResult RboPermutationTest(const Ranking& r1, const Ranking& r2,
                                     const PermutationOptions& options);

struct CorrelationResult {
  std::string a;
  std::string b;
  int n = 0;
  double tau = 0.0;
  double rbo = 0.0;
  double z_score = 0.0;
  double tau_p_value = 0.0;
  double rbo_p_value = 0.0;
  double persistence = kDefaultPersistence;
};

CorrelationResult Correlate(const Ranking& r1, const Ranking& r2,
                            const PermutationOptions& options,
                            TauVariance variance = TauVariance::kPairCount);

// Both rankings cut down to the models they share, order kept.
std::pair<Ranking, Ranking> RestrictToCommon(const Ranking& r1,
                                             const Ranking& r2);

inline constexpr char kOutcomePolicy[] =
    "avg_win_rate desc; avg_rounds asc; model id asc";
inline constexpr char kRecallPolicy[] =
    "recall_rate desc; avg_rounds asc; model id asc";
inline constexpr char kBluffingRetroPolicy[] =
    "final_rank asc; spearman_rho asc; avg_rounds asc; model id asc";

// One outcome ranking per game in `outcome` and one retro ranking per game in
// `procedural`, ids "<game>-outcome" and "<game>-retro". Every game needs at
// least two models, and a retro ranking needs an outcome report for each of
// its models (avg_rounds breaks ties). Throws RankingError otherwise.
std::vector<Ranking> BuildRankings(
    const std::vector<metrics::OutcomeReport>& outcome,
    const std::vector<metrics::ProceduralReport>& procedural);

struct RankingFixture {
  std::string name;
  std::map<std::string, std::string> model_names;
  std::vector<Ranking> rankings;

  const Ranking& Get(const std::string& id) const;
};

// {"name", "models": [{"id", "name"}], "rankings": [{"id", "label",
//  "ranks": {model: rank}}]}. Rows may rank a subset of the models.
RankingFixture ParseFixture(const std::string& json_text);
RankingFixture LoadFixture(const std::string& path);

// {"id", "label", "models": [...], "tie_break_policy"}
std::string RankingToJson(const Ranking& ranking);
Ranking RankingFromJson(const std::string& json_text);

}  // namespace playbench::ranking

#endif  // PLAYBENCH_RANKING_RANKING_H_
