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

#include "playbench/ranking/ranking.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "playbench/game/random.h"

namespace playbench::ranking {
namespace {

using game::GameKind;
using nlohmann::json;

constexpr double kTieEpsilon = 1e-12;

// Positions of r2's models in r1. Both rankings must cover the same set.
std::vector<int> Relabel(const Ranking& r1, const Ranking& r2) {
  r1.Validate();
  r2.Validate();
  if (r1.models.size() != r2.models.size()) {
    throw RankingError("rankings " + r1.id + " and " + r2.id +
                       " rank different model sets");
  }
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < r1.models.size(); ++i) {
    pos[r1.models[i]] = static_cast<int>(i);
  }
  std::vector<int> out;
  for (const std::string& m : r2.models) {
    auto it = pos.find(m);
    if (it == pos.end()) {
      throw RankingError("model " + m + " of " + r2.id + " is missing from " +
                         r1.id);
    }
    out.push_back(it->second);
  }
  return out;
}

void CheckPersistence(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw RankingError("persistence must lie in (0, 1)");
  }
}

// r1 is the identity order 0..n-1, r2 is `order`.
double RboOfOrder(const std::vector<int>& order, double p, RboVariant variant) {
  const std::size_t n = order.size();
  std::vector<char> in1(n, 0), in2(n, 0);
  int overlap = 0;
  double sum = 0.0;
  double weight = 1.0;  // p^(d-1)
  for (std::size_t d = 1; d <= n; ++d) {
    int a = static_cast<int>(d - 1);
    int b = order[d - 1];
    if (a == b) {
      ++overlap;
    } else {
      if (in2[a]) ++overlap;
      if (in1[b]) ++overlap;
    }
    in1[a] = 1;
    in2[b] = 1;
    sum += (static_cast<double>(overlap) / static_cast<double>(d)) * weight;
    weight *= p;
  }
  double value = (1.0 - p) * sum;
  if (variant == RboVariant::kConjoint) value += weight;  // weight == p^n
  return value;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string GameId(GameKind game) { return std::string(game::GameName(game)); }

}  // namespace

void Ranking::Validate() const {
  if (models.size() < 2) {
    throw RankingError("ranking " + id + " needs at least two models");
  }
  std::set<std::string> seen(models.begin(), models.end());
  if (seen.size() != models.size()) {
    throw RankingError("ranking " + id + " lists a model twice");
  }
}

Ranking Ranking::Reversed() const {
  Ranking r = *this;
  std::reverse(r.models.begin(), r.models.end());
  return r;
}

Concordance CountPairs(const Ranking& r1, const Ranking& r2) {
  std::vector<int> order = Relabel(r1, r2);
  // rank2[x] = position of r1's x-th model in r2
  std::vector<int> rank2(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank2[order[i]] = static_cast<int>(i);
  }
  Concordance c;
  for (std::size_t i = 0; i < rank2.size(); ++i) {
    for (std::size_t j = i + 1; j < rank2.size(); ++j) {
      if (rank2[i] < rank2[j]) {
        ++c.concordant;
      } else {
        ++c.discordant;
      }
    }
  }
  return c;
}

double KendallTau(const Ranking& r1, const Ranking& r2) {
  Concordance c = CountPairs(r1, r2);
  const long n = static_cast<long>(r1.models.size());
  return static_cast<double>(c.concordant - c.discordant) /
         (static_cast<double>(n * (n - 1)) / 2.0);
}

double Rbo(const Ranking& r1, const Ranking& r2, double p, RboVariant variant) {
  CheckPersistence(p);
  return RboOfOrder(Relabel(r1, r2), p, variant);
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

ZTest TauZTest(double tau, int n, TauVariance variance) {
  if (n < 2) throw RankingError("Z-test needs n >= 2");
  const double nn = n;
  double var = variance == TauVariance::kPairCount
                   ? 2.0 / (nn * (nn - 1.0))
                   : 2.0 * (2.0 * nn + 5.0) / (9.0 * nn * (nn - 1.0));
  ZTest t;
  t.z = tau / std::sqrt(var);
  t.p_value = 1.0 - NormalCdf(t.z);
  return t;
}

PermutationResult RboPermutationTest(const Ranking& r1, const Ranking& r2,
                                     const PermutationOptions& options) {
  CheckPersistence(options.p);
  PermutationResult result;
  result.observed = RboOfOrder(Relabel(r1, r2), options.p, options.variant);
  const double threshold = result.observed - kTieEpsilon;
  std::vector<int> order(r1.models.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.exhaustive) {
    if (order.size() > 8) {
      throw RankingError("exhaustive permutation test is limited to n <= 8");
    }
    do {
      ++result.trials;
      if (RboOfOrder(order, options.p, options.variant) >= threshold) {
        ++result.at_least;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    if (options.iterations < 1) {
      throw RankingError("permutation test needs at least one iteration");
    }
    rng::Engine engine(options.seed);
    for (int i = 0; i < options.iterations; ++i) {
      std::iota(order.begin(), order.end(), 0);
      rng::Shuffle(engine, std::span<int>(order));
      ++result.trials;
      if (RboOfOrder(order, options.p, options.variant) >= threshold) {
        ++result.at_least;
      }
    }
  }
  result.p_value =
      static_cast<double>(result.at_least) / static_cast<double>(result.trials);
  return result;
}

CorrelationResult Correlate(const Ranking& r1, const Ranking& r2,
                            const PermutationOptions& options,
                            TauVariance variance) {
  CorrelationResult c;
  c.a = r1.id;
  c.b = r2.id;
  c.n = static_cast<int>(r1.models.size());
  c.tau = KendallTau(r1, r2);
  c.persistence = options.p;
  c.rbo = Rbo(r1, r2, options.p, options.variant);
  ZTest z = TauZTest(c.tau, c.n, variance);
  c.z_score = z.z;
  c.tau_p_value = z.p_value;
  c.rbo_p_value = RboPermutationTest(r1, r2, options).p_value;
  return c;
}

std::pair<Ranking, Ranking> RestrictToCommon(const Ranking& r1,
                                             const Ranking& r2) {
  std::set<std::string> in1(r1.models.begin(), r1.models.end());
  std::set<std::string> in2(r2.models.begin(), r2.models.end());
  Ranking a = r1, b = r2;
  std::erase_if(a.models, [&](const std::string& m) { return !in2.contains(m); });
  std::erase_if(b.models, [&](const std::string& m) { return !in1.contains(m); });
  return {a, b};
}

std::vector<Ranking> BuildRankings(
    const std::vector<metrics::OutcomeReport>& outcome,
    const std::vector<metrics::ProceduralReport>& procedural) {
  std::map<std::pair<GameKind, std::string>, const metrics::OutcomeReport*>
      by_key;
  std::map<GameKind, std::vector<const metrics::OutcomeReport*>> by_game;
  for (const auto& r : outcome) {
    if (!by_key.emplace(std::pair{r.game, r.model}, &r).second) {
      throw RankingError("two outcome reports for " + r.model + " on " +
                         GameId(r.game));
    }
    by_game[r.game].push_back(&r);
  }
  std::vector<Ranking> out;
  for (auto& [g, reports] : by_game) {
    std::sort(reports.begin(), reports.end(), [](auto* x, auto* y) {
      return std::tuple(-x->avg_win_rate, x->avg_rounds, x->model) <
             std::tuple(-y->avg_win_rate, y->avg_rounds, y->model);
    });
    Ranking r;
    r.id = GameId(g) + "-outcome";
    r.label = "GameArena " + r.id;
    r.tie_break_policy = kOutcomePolicy;
    for (auto* rep : reports) r.models.push_back(rep->model);
    r.Validate();
    out.push_back(std::move(r));
  }

  std::map<GameKind, std::vector<const metrics::ProceduralReport*>> retro;
  for (const auto& r : procedural) retro[r.game].push_back(&r);
  for (auto& [g, reports] : retro) {
    struct Key {
      double primary;
      double secondary;
      double rounds;
      std::string model;
    };
    std::vector<Key> keys;
    for (auto* rep : reports) {
      auto it = by_key.find({g, rep->model});
      if (it == by_key.end()) {
        throw RankingError("no outcome report for " + rep->model + " on " +
                           GameId(g) + " to break retro ties");
      }
      Key k{0.0, 0.0, it->second->avg_rounds, rep->model};
      if (g == GameKind::kBluffing) {
        if (!rep->avg_final_rank || !rep->spearman_rho) {
          throw RankingError(rep->model + " lacks Bluffing final rank or rho");
        }
        k.primary = *rep->avg_final_rank;
        k.secondary = *rep->spearman_rho;
      } else {
        if (!rep->recall_rate) {
          throw RankingError(rep->model + " lacks a recall rate on " +
                             GameId(g));
        }
        k.primary = -*rep->recall_rate;
      }
      keys.push_back(std::move(k));
    }
    std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
      return std::tie(x.primary, x.secondary, x.rounds, x.model) <
             std::tie(y.primary, y.secondary, y.rounds, y.model);
    });
    Ranking r;
    r.id = GameId(g) + "-retro";
    r.label = "GameArena " + r.id;
    r.tie_break_policy =
        g == GameKind::kBluffing ? kBluffingRetroPolicy : kRecallPolicy;
    for (const Key& k : keys) r.models.push_back(k.model);
    r.Validate();
    out.push_back(std::move(r));
  }
  return out;
}

const Ranking& RankingFixture::Get(const std::string& id) const {
  const std::string want = Lower(id);
  for (const Ranking& r : rankings) {
    if (r.id == want) return r;
  }
  throw RankingError("fixture " + name + " has no ranking " + id);
}

RankingFixture ParseFixture(const std::string& json_text) {
  RankingFixture f;
  try {
    json j = json::parse(json_text);
    f.name = j.value("name", "");
    for (const json& m : j.at("models")) {
      f.model_names[m.at("id").get<std::string>()] =
          m.value("name", m.at("id").get<std::string>());
    }
    for (const json& row : j.at("rankings")) {
      Ranking r;
      r.id = row.at("id").get<std::string>();
      r.label = row.value("label", r.id);
      r.tie_break_policy = "fixture";
      std::vector<std::pair<int, std::string>> ranks;
      std::set<int> used;
      for (auto& [model, rank] : row.at("ranks").items()) {
        if (!f.model_names.contains(model)) {
          throw RankingError("fixture row " + r.id + " names unknown model " +
                             model);
        }
        int value = rank.get<int>();
        if (!used.insert(value).second) {
          throw RankingError("fixture row " + r.id + " repeats rank " +
                             std::to_string(value));
        }
        ranks.emplace_back(value, model);
      }
      std::sort(ranks.begin(), ranks.end());
      for (auto& [rank, model] : ranks) r.models.push_back(model);
      r.Validate();
      f.rankings.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw RankingError(std::string("malformed ranking fixture: ") + e.what());
  }
  return f;
}

RankingFixture LoadFixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseFixture(buffer.str());
}

std::string RankingToJson(const Ranking& ranking) {
  json j = {{"id", ranking.id},
            {"label", ranking.label},
            {"models", ranking.models},
            {"tie_break_policy", ranking.tie_break_policy}};
  return j.dump(2);
}

Ranking RankingFromJson(const std::string& json_text) {
  Ranking r;
  try {
    json j = json::parse(json_text);
    r.id = j.at("id").get<std::string>();
    r.label = j.value("label", r.id);
    r.models = j.at("models").get<std::vector<std::string>>();
    r.tie_break_policy = j.value("tie_break_policy", "");
  } catch (const json::exception& e) {
    throw RankingError(std::string("malformed ranking: ") + e.what());
  }
  r.Validate();
  return r;
}

}  // namespace playbench::ranking
