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

// Exact reference implementation of the metrics, written from the metric
// definitions with boost::rational arithmetic and its own string
// normalization. Used to cross-check the production code.

#ifndef PLAYBENCH_TESTS_SUPPORT_METRIC_ORACLE_H_
#define PLAYBENCH_TESTS_SUPPORT_METRIC_ORACLE_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "playbench/sim/analysis.h"
#include "playbench/sim/assets.h"
#include "playbench/store/store.h"

namespace playbench::oracle {

using Q = boost::rational<long long>;

struct OutcomeRow {
  int sessions = 0;
  Q win_rate, avg_rounds;
  // Population variances of the per-prompt means.
  Q prompt_win_rate_var, prompt_rounds_var;
};

struct ProceduralRow {
  int sessions = 0;
  std::optional<Q> recall, top5, top10, disparity, first, final_rank,
      spearman, hopping, bluffing_recall, no_verdict_rate;
  int final_rank_missing = 0;
};

struct Reference {
  std::map<std::pair<game::GameKind, std::string>, OutcomeRow> outcome;
  std::map<std::pair<game::GameKind, std::string>, ProceduralRow> procedural;
};

Reference Compute(const std::vector<store::SessionRecord>& records,
                  const std::vector<retro::RetroTrace>& traces,
                  const sim::Ontology& ontology);

// Mismatches between the production analysis and the reference, one line
// each. Values must agree exactly or within `tolerance`.
std::vector<std::string> Compare(const sim::CorpusAnalysis& analysis,
                                 const Reference& reference,
                                 double tolerance = 1e-12);

// Lowercased alphanumeric tokens, leading article dropped, last token
// compared up to a trailing "s"/"es".
bool SameName(const std::string& a, const std::string& b);

}  // namespace playbench::oracle

#endif  // PLAYBENCH_TESTS_SUPPORT_METRIC_ORACLE_H_
