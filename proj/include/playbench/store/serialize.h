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

// JSON forms of sessions, retro traces and metric reports. Optional fields
// are omitted when absent; keys come out sorted, so a value always has one
// serialization.

#ifndef PLAYBENCH_STORE_SERIALIZE_H_
#define PLAYBENCH_STORE_SERIALIZE_H_

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "playbench/game/types.h"
#include "playbench/metrics/metrics.h"
#include "playbench/ranking/ranking.h"
#include "playbench/retro/retro.h"

namespace playbench::store {

using Json = nlohmann::json;

// Malformed or schema-violating input.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json ToJson(const game::GameConfig& config);
Json ToJson(const game::InferenceParams& params);
Json ToJson(const game::Prediction& prediction);
Json ToJson(const game::Turn& turn);
Json ToJson(const game::Outcome& outcome);
Json ToJson(const game::Session& session);
Json ToJson(const retro::RetroTrace& trace);
Json ToJson(const metrics::OutcomeReport& report);
Json ToJson(const metrics::ProceduralReport& report);
Json ToJson(const ranking::CorrelationResult& result);
Json ToJson(const ranking::Ranking& ranking);

// Throw SchemaError.
game::GameConfig ConfigFromJson(const Json& j);
game::InferenceParams ParamsFromJson(const Json& j);
game::Session SessionFromJson(const Json& j);
retro::RetroTrace TraceFromJson(const Json& j);

// UTC "YYYY-MM-DD" of a millisecond timestamp.
std::string UtcDate(std::int64_t ms);
// UTC "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string UtcTimestamp(std::int64_t ms);

}  // namespace playbench::store

#endif  // PLAYBENCH_STORE_SERIALIZE_H_
