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

#include "playbench/service/service.h"

#include <chrono>
#include <cstdio>

#include "playbench/game/random.h"
#include "playbench/retro/retro.h"
#include "playbench/sim/analysis.h"
#include "playbench/store/serialize.h"

namespace playbench::service {
namespace {

using game::ErrorCode;
using game::GameKind;

ApiError BadRequest(const std::string& message) {
  return ApiError(kInvalidRequest, message, false, 400);
}

ApiError NotFound(const std::string& id) {
  return ApiError(kNotFound, "no session " + id, false, 404);
}

std::optional<std::string> OptString(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw BadRequest(std::string(key) + " must be a string");
  return it->get<std::string>();
}

// What the client is expected to send next.
std::string_view Awaiting(const game::Session& s) {
  switch (s.phase) {
    case game::Phase::kAwaitingModel: return "model_retry";
    case game::Phase::kAwaitingFeedback: return "outcome";
    case game::Phase::kFinished: return "nothing";
    case game::Phase::kAwaitingUser: break;
  }
  if (s.finished()) return "nothing";
  switch (s.game()) {
    case GameKind::kAkinator: return "answer";
    case GameKind::kTaboo: return "clue";
    case GameKind::kBluffing: return s.turns.empty() ? "statement" : "answer";
  }
  return "answer";
}

Json PredictionView(const game::Prediction& p) {
  if (p.is_verdict()) return {{"verdict", p.verdict()}};
  return {{"guess", p.text()}};
}

}  // namespace

Json ApiError::ToJson() const {
  return {{"error",
           {{"code", code_}, {"message", what()}, {"retryable", retryable_}}}};
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kEmptyWordList:
      return 400;
    case ErrorCode::kDuplicateSessionId:
    case ErrorCode::kSessionFinished:
    case ErrorCode::kNotUsersTurn:
    case ErrorCode::kNotModelsTurn:
    case ErrorCode::kAwaitingFeedback:
    case ErrorCode::kPredictionPending:
    case ErrorCode::kNoPendingPrediction:
    case ErrorCode::kGameNotOver:
      return 409;
    case ErrorCode::kEmptyInput:
    case ErrorCode::kCharLimitExceeded:
    case ErrorCode::kUnparseableAnswer:
    case ErrorCode::kMissingRevealedSecret:
    case ErrorCode::kStatementMismatch:
      return 422;
  }
  return 400;
}

ApiError FromGameError(const game::GameError& e) {
  return ApiError(std::string(game::ErrorCodeName(e.code())), e.what(), false,
                  HttpStatusFor(e.code()));
}

NowMs SystemNowMs() {
  return [] {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
        .count();
  };
}

ArenaService::ArenaService(const sim::Platform& platform,
                           std::shared_ptr<gateway::ChatClient> client,
                           store::SessionStore& store, ServiceOptions options,
                           NowMs now)
    : platform_(platform),
      client_(std::move(client)),
      store_(store),
      options_(options),
      now_(std::move(now)),
      model_slots_(std::max(1, options.max_concurrent_model_calls)),
      rng_(options.seed ? *options.seed : std::random_device{}()) {}

void ArenaService::Touch(Live& live) {
  live.last_activity_ms = now_();
  if (live.session.finished()) Persist(live);
}

void ArenaService::Persist(Live& live) {
  if (live.persisted) return;
  try {
    store_.Append(store::SessionRecord::For(live.session));
  } catch (const store::StoreError& e) {
    throw ApiError(kInternal, std::string("could not store session: ") + e.what(),
                   e.kind() == store::StoreError::Kind::kIo, 500);
  }
  live.persisted = true;
}

std::shared_ptr<ArenaService::Live> ArenaService::Find(
    const std::string& session_id) {
  std::lock_guard lock(mu_);
  auto it = live_.find(session_id);
  if (it != live_.end()) return it->second;
  if (store_.Contains(session_id)) {
    throw FromGameError(game::GameError(ErrorCode::kSessionFinished,
                                        "session has already ended"));
  }
  throw NotFound(session_id);
}

void ArenaService::CallModel(Live& live) {
  game::Session& s = live.session;
  const gateway::ModelRef* model = nullptr;
  for (const auto& m : platform_.config.models) {
    if (m.id == s.model_ref) model = &m;
  }
  if (model == nullptr) {
    throw ApiError(kModelUnavailable, "the paired model is no longer configured",
                   false, 503);
  }
  std::string output;
  model_slots_.acquire();
  try {
    output = client_->Complete(*model, s.system_prompt,
                               retro::SessionMessages(s), s.inference_params);
  } catch (const gateway::GatewayError&) {
    model_slots_.release();
    live.model_failed = true;
    throw ApiError(kModelUnavailable,
                   "the model did not answer; retry with {\"retry\": true}",
                   true, 503);
  }
  model_slots_.release();
  try {
    game::ApplyModelTurn(s, output);
  } catch (const game::GameError&) {
    live.model_failed = true;
    throw ApiError(kModelUnavailable,
                   "the model reply was unusable; retry with {\"retry\": true}",
                   true, 503);
  }
  live.model_failed = false;
}

Json ArenaService::StartSession(const Json& body,
                                const std::optional<std::string>& key) {
  ExpireStale();
  std::unique_lock start_lock(start_mu_, std::defer_lock);
  if (key) {
    start_lock.lock();
    if (auto it = start_replies_.find(*key); it != start_replies_.end()) {
      return it->second;
    }
  }
  if (!body.is_object() && !body.is_null()) {
    throw BadRequest("body must be a JSON object");
  }
  std::vector<GameKind> games(std::begin(game::kAllGames),
                              std::end(game::kAllGames));
  if (auto g = body.is_object() ? OptString(body, "game") : std::nullopt) {
    try {
      games = {game::ParseGameKind(*g)};
    } catch (const std::exception&) {
      throw BadRequest("unknown game: " + *g);
    }
  }
  if (platform_.config.models.empty()) {
    throw ApiError(kNoModels, "no models are configured", false, 503);
  }
  std::uint64_t seed = 0;
  std::string id;
  {
    std::lock_guard lock(mu_);
    seed = rng_();
    do {
      char buf[24];
      std::snprintf(buf, sizeof buf, "s-%016llx",
                    static_cast<unsigned long long>(rng_()));
      id = buf;
    } while (live_.contains(id) || store_.Contains(id));
  }
  if (body.is_object() && body.contains("seed")) {
    if (!body["seed"].is_number_integer()) throw BadRequest("seed must be an integer");
    seed = body["seed"].get<std::uint64_t>();
  }

  gateway::Pairing pairing;
  try {
    pairing = gateway::PairRandomly(games, platform_.config.models,
                                    platform_.prompts, seed);
  } catch (const game::GameError& e) {
    throw ApiError(kNoModels, e.what(), false, 503);
  }
  game::SecretSource secret = game::WithheldSecret{};
  if (pairing.game == GameKind::kTaboo) {
    secret = game::WordListDraw{rng::DeriveSeed(seed, 2)};
  } else if (pairing.game == GameKind::kBluffing && body.is_object() &&
             body.contains("truthful")) {
    if (!body["truthful"].is_boolean()) throw BadRequest("truthful must be a boolean");
    secret = game::ProvidedSecret{std::nullopt, std::nullopt,
                                  body["truthful"].get<bool>()};
  }
  game::SessionSetup setup;
  setup.session_id = id;
  setup.model_ref = pairing.model.id;
  setup.prompt_ref = pairing.prompt.id;
  setup.system_prompt = pairing.prompt.body;
  setup.inference_params.seed =
      static_cast<std::int64_t>(rng::DeriveSeed(seed, 3) >> 1);
  setup.created_at_ms = now_();

  auto live = std::make_shared<Live>();
  try {
    live->session = game::CreateSession(
        platform_.GameConfigFor(pairing.game), setup, secret);
  } catch (const game::GameError& e) {
    throw FromGameError(e);
  }
  live->last_activity_ms = setup.created_at_ms;
  std::lock_guard session_lock(live->mu);
  {
    std::lock_guard lock(mu_);
    live_[id] = live;
  }
  if (pairing.game == GameKind::kAkinator) {
    game::ApplyUserTurn(live->session, kAkinatorOpening);
    try {
      CallModel(*live);
    } catch (const ApiError& e) {
      if (!e.retryable()) throw;
    }
  }
  Touch(*live);
  Json view = View(live->session);
  if (key) start_replies_[*key] = view;
  return view;
}

Json ArenaService::GetSession(const std::string& session_id) {
  ExpireStale();
  std::shared_ptr<Live> live;
  {
    std::lock_guard lock(mu_);
    if (auto it = live_.find(session_id); it != live_.end()) live = it->second;
  }
  if (live) {
    std::lock_guard lock(live->mu);
    return View(live->session);
  }
  std::optional<store::SessionRecord> record;
  try {
    record = store_.Get(session_id);
  } catch (const store::StoreError& e) {
    throw ApiError(kInternal, e.what(), true, 500);
  }
  if (!record) throw NotFound(session_id);
  return View(record->session);
}

Json ArenaService::PostMessage(const std::string& session_id, const Json& body,
                               const std::optional<std::string>& key) {
  ExpireStale();
  std::shared_ptr<Live> live = Find(session_id);
  std::lock_guard lock(live->mu);
  if (key) {
    if (auto it = live->replies.find(*key); it != live->replies.end()) {
      return it->second;
    }
  }
  if (!body.is_object()) throw BadRequest("body must be a JSON object");
  game::Session& s = live->session;
  const bool retry = body.value("retry", false);
  if (retry) {
    if (s.finished()) {
      throw FromGameError(
          game::GameError(ErrorCode::kSessionFinished, "session has ended"));
    }
    if (s.phase != game::Phase::kAwaitingModel) {
      throw FromGameError(game::GameError(ErrorCode::kNotModelsTurn,
                                          "nothing to retry; it is your turn"));
    }
  } else {
    std::optional<std::string> text = OptString(body, "text");
    if (!text) throw BadRequest("text is required");
    try {
      game::ApplyUserTurn(s, *text);
    } catch (const game::GameError& e) {
      throw FromGameError(e);
    }
  }
  if (!s.finished() && s.phase == game::Phase::kAwaitingModel) {
    try {
      CallModel(*live);
    } catch (const ApiError&) {
      Touch(*live);
      throw;
    }
  }
  Touch(*live);
  Json view = View(s);
  if (key) live->replies[*key] = view;
  return view;
}

Json ArenaService::PostOutcome(const std::string& session_id, const Json& body,
                               const std::optional<std::string>& key) {
  ExpireStale();
  std::shared_ptr<Live> live = Find(session_id);
  std::lock_guard lock(live->mu);
  if (key) {
    if (auto it = live->replies.find(*key); it != live->replies.end()) {
      return it->second;
    }
  }
  if (!body.is_object()) throw BadRequest("body must be a JSON object");
  std::optional<std::string> feedback_name = OptString(body, "feedback");
  if (!feedback_name) throw BadRequest("feedback is required");
  game::Feedback feedback;
  try {
    feedback = game::ParseFeedback(*feedback_name);
  } catch (const game::GameError&) {
    throw BadRequest("feedback must be confirmed_correct or confirmed_incorrect");
  }
  try {
    game::FinalizeSession(live->session, feedback,
                          OptString(body, "revealed_secret"));
  } catch (const game::GameError& e) {
    throw FromGameError(e);
  }
  Touch(*live);
  Json view = View(live->session);
  if (key) live->replies[*key] = view;
  return view;
}

Json ArenaService::Leaderboard(const std::optional<std::string>& game_name,
                               const std::optional<std::string>& family_name) {
  std::optional<GameKind> game;
  std::optional<sim::MetricFamily> family;
  try {
    if (game_name && !game_name->empty()) game = game::ParseGameKind(*game_name);
    if (family_name && !family_name->empty()) {
      family = sim::ParseMetricFamily(*family_name);
    }
  } catch (const std::exception& e) {
    throw BadRequest(e.what());
  }
  sim::CorpusAnalysis analysis;
  try {
    metrics::Classifier classifier = platform_.assets->ontology.AsClassifier();
    analysis = sim::Analyze(store_.Load(), store_.LoadTraces(), &classifier);
  } catch (const store::StoreError& e) {
    throw ApiError(kInternal, e.what(), true, 500);
  }
  std::vector<sim::LeaderboardEntry> entries =
      sim::BuildLeaderboard(analysis, game, family);
  if (entries.empty()) {
    throw ApiError(kNoData, "not enough finished sessions to rank", false, 404);
  }
  Json out = Json::array();
  for (const auto& e : entries) {
    Json models = Json::array();
    for (std::size_t i = 0; i < e.ranking.models.size(); ++i) {
      const std::string& id = e.ranking.models[i];
      Json m = {{"rank", i + 1}, {"model", id}};
      for (const auto& r : analysis.outcome) {
        if (r.game == e.game && r.model == id) {
          m["sessions"] = r.sessions;
          m["avg_win_rate"] = r.avg_win_rate;
          m["avg_rounds"] = r.avg_rounds;
          m["prompt_win_rate_std"] = r.prompt_win_rate_std;
          m["prompt_rounds_std"] = r.prompt_rounds_std;
        }
      }
      if (e.family == sim::MetricFamily::kRetro) {
        for (const auto& r : analysis.procedural) {
          if (r.game == e.game && r.model == id) m["retro"] = store::ToJson(r);
        }
      }
      models.push_back(std::move(m));
    }
    out.push_back({{"game", game::GameName(e.game)},
                   {"family", sim::MetricFamilyName(e.family)},
                   {"ranking", store::ToJson(e.ranking)},
                   {"models", models}});
  }
  return {{"leaderboard", out},
          {"useful_data_rate", analysis.useful_data_rate
                                   ? Json(*analysis.useful_data_rate)
                                   : Json(nullptr)}};
}

Json ArenaService::Health() {
  std::lock_guard lock(mu_);
  int active = 0;
  for (const auto& [id, live] : live_) {
    std::lock_guard session_lock(live->mu);
    if (!live->session.finished()) ++active;
  }
  return {{"status", "ok"},
          {"active_sessions", active},
          {"models", platform_.config.models.size()}};
}

int ArenaService::ExpireStale() {
  const std::int64_t cutoff =
      now_() - static_cast<std::int64_t>(options_.expiry_hours * 3600.0 * 1000.0);
  std::vector<std::shared_ptr<Live>> candidates;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, live] : live_) candidates.push_back(live);
  }
  int expired = 0;
  for (const auto& live : candidates) {
    std::unique_lock lock(live->mu, std::try_to_lock);
    if (!lock.owns_lock()) continue;  // busy, so not idle
    if (live->session.finished() || live->last_activity_ms > cutoff) continue;
    game::AbandonSession(live->session);
    Persist(*live);
    ++expired;
  }
  return expired;
}

Json ArenaService::View(const game::Session& s) const {
  Json transcript = Json::array();
  for (const game::Turn& t : s.turns) {
    transcript.push_back(
        {{"role", game::RoleName(t.role)},
         {"content", t.content},
         {"kind", t.kind == game::TurnKind::kPrediction ? "prediction"
                                                        : "ordinary"}});
  }
  const int max_rounds = s.config.max_rounds;
  Json v = {{"session_id", s.session_id},
            {"game", game::GameName(s.game())},
            {"status", game::StatusName(s.status)},
            {"phase", game::PhaseName(s.phase)},
            {"awaiting", Awaiting(s)},
            {"transcript", transcript},
            {"rounds_used", s.round_count},
            {"rounds_remaining", std::max(0, max_rounds - s.round_count)},
            {"created_at", store::UtcTimestamp(s.created_at_ms)}};
  if (s.game() == GameKind::kTaboo) {
    if (s.config.user_char_limit) v["char_budget"] = *s.config.user_char_limit;
    if (s.secret.text) v["secret_word"] = *s.secret.text;
  }
  if (s.pending_prediction) {
    v["pending_prediction"] = PredictionView(*s.pending_prediction);
  }
  if (s.phase == game::Phase::kAwaitingModel && !s.finished()) {
    v["model_retry_needed"] = true;
  }
  if (s.finished() || !options_.blind_play) v["model"] = s.model_ref;
  if (s.outcome) {
    const game::Outcome& o = *s.outcome;
    Json out = {{"winner", o.winner == game::Winner::kModel ? "model" : "user"},
                {"rounds", o.rounds}};
    if (o.revealed_secret) out["revealed_secret"] = *o.revealed_secret;
    if (o.user_feedback) out["user_feedback"] = game::FeedbackName(*o.user_feedback);
    if (o.rule_violation) out["rule_violation"] = *o.rule_violation;
    v["outcome"] = out;
  }
  return v;
}

}  // namespace playbench::service
