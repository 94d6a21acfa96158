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

#include "playbench/store/serialize.h"

#include <chrono>
#include <cstdio>

namespace playbench::store {
namespace {

using game::GameKind;

template <typename T>
void PutOpt(Json& j, const char* key, const std::optional<T>& v) {
  if (v.has_value()) j[key] = *v;
}

template <typename T>
std::optional<T> GetOpt(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

std::string_view KeywordMatchName(game::KeywordMatch m) {
  switch (m) {
    case game::KeywordMatch::kExact: return "exact";
    case game::KeywordMatch::kPluralFold: return "plural_fold";
    case game::KeywordMatch::kSubstring: return "substring";
  }
  return "plural_fold";
}

game::KeywordMatch ParseKeywordMatch(const std::string& s) {
  if (s == "exact") return game::KeywordMatch::kExact;
  if (s == "plural_fold") return game::KeywordMatch::kPluralFold;
  if (s == "substring") return game::KeywordMatch::kSubstring;
  throw SchemaError("unknown keyword_match: " + s);
}

game::AkinatorAnswer ParseAnswerName(const std::string& s) {
  for (auto a : {game::AkinatorAnswer::kYes, game::AkinatorAnswer::kNo,
                 game::AkinatorAnswer::kProbablyYes,
                 game::AkinatorAnswer::kProbablyNo,
                 game::AkinatorAnswer::kDontKnow}) {
    if (game::AkinatorAnswerName(a) == s) return a;
  }
  throw SchemaError("unknown answer: " + s);
}

std::string_view WinnerName(game::Winner w) {
  return w == game::Winner::kModel ? "model" : "user";
}

game::Winner ParseWinner(const std::string& s) {
  if (s == "model") return game::Winner::kModel;
  if (s == "user") return game::Winner::kUser;
  throw SchemaError("unknown winner: " + s);
}

game::Role ParseRole(const std::string& s) {
  if (s == "user") return game::Role::kUser;
  if (s == "model") return game::Role::kModel;
  throw SchemaError("unknown role: " + s);
}

game::Prediction PredictionFromJson(const Json& j) {
  GameKind g = game::ParseGameKind(j.at("game").get<std::string>());
  if (j.contains("verdict")) return game::Prediction::Verdict(j.at("verdict"));
  return game::Prediction::Guess(g, j.at("guess").get<std::string>());
}

game::Outcome OutcomeFromJson(const Json& j) {
  game::Outcome o;
  o.winner = ParseWinner(j.at("winner"));
  o.win_indicator = j.at("win_indicator");
  o.rounds = j.at("rounds");
  o.revealed_secret = GetOpt<std::string>(j, "revealed_secret");
  if (auto f = GetOpt<std::string>(j, "user_feedback")) {
    o.user_feedback = game::ParseFeedback(*f);
  }
  o.rule_violation = GetOpt<std::string>(j, "rule_violation");
  return o;
}

game::Turn TurnFromJson(const Json& j) {
  game::Turn t;
  t.index = j.at("index");
  t.role = ParseRole(j.at("role"));
  t.content = j.at("content");
  t.kind = j.at("kind").get<std::string>() == "prediction"
               ? game::TurnKind::kPrediction
               : game::TurnKind::kOrdinary;
  if (j.contains("prediction")) t.prediction = PredictionFromJson(j["prediction"]);
  if (auto a = GetOpt<std::string>(j, "answer")) t.answer = ParseAnswerName(*a);
  t.question_number = GetOpt<int>(j, "question_number");
  t.numbering_anomaly = j.value("numbering_anomaly", false);
  t.uttered_secret = j.value("uttered_secret", false);
  return t;
}

template <typename F>
auto Guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed ") + what + ": " + e.what());
  } catch (const game::GameError& e) {
    throw SchemaError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

Json ToJson(const game::GameConfig& c) {
  Json j = {{"game", game::GameName(c.game)},
            {"max_rounds", c.max_rounds},
            {"taboo_word_list", c.taboo_word_list},
            {"judgment_levels", c.judgment_levels},
            {"keyword_match", KeywordMatchName(c.keyword_match)}};
  PutOpt(j, "user_char_limit", c.user_char_limit);
  return j;
}

Json ToJson(const game::InferenceParams& p) {
  Json j = {{"temperature", p.temperature},
            {"top_p", p.top_p},
            {"max_output_tokens", p.max_output_tokens}};
  PutOpt(j, "seed", p.seed);
  return j;
}

Json ToJson(const game::Prediction& p) {
  Json j = {{"game", game::GameName(p.game)}};
  if (p.is_verdict()) {
    j["verdict"] = p.verdict();
  } else {
    j["guess"] = p.text();
  }
  return j;
}

Json ToJson(const game::Turn& t) {
  Json j = {{"index", t.index},
            {"role", game::RoleName(t.role)},
            {"content", t.content},
            {"kind", t.kind == game::TurnKind::kPrediction ? "prediction"
                                                           : "ordinary"},
            {"numbering_anomaly", t.numbering_anomaly},
            {"uttered_secret", t.uttered_secret}};
  if (t.prediction) j["prediction"] = ToJson(*t.prediction);
  if (t.answer) j["answer"] = game::AkinatorAnswerName(*t.answer);
  PutOpt(j, "question_number", t.question_number);
  return j;
}

Json ToJson(const game::Outcome& o) {
  Json j = {{"winner", WinnerName(o.winner)},
            {"win_indicator", o.win_indicator},
            {"rounds", o.rounds}};
  PutOpt(j, "revealed_secret", o.revealed_secret);
  if (o.user_feedback) j["user_feedback"] = game::FeedbackName(*o.user_feedback);
  PutOpt(j, "rule_violation", o.rule_violation);
  return j;
}

Json ToJson(const game::Session& s) {
  Json secret = Json::object();
  PutOpt(secret, "text", s.secret.text);
  PutOpt(secret, "statement", s.secret.statement);
  PutOpt(secret, "truthful", s.secret.truthful);
  Json turns = Json::array();
  for (const game::Turn& t : s.turns) turns.push_back(ToJson(t));
  Json j = {{"session_id", s.session_id},
            {"config", ToJson(s.config)},
            {"model_ref", s.model_ref},
            {"prompt_ref", s.prompt_ref},
            {"system_prompt", s.system_prompt},
            {"inference_params", ToJson(s.inference_params)},
            {"secret", secret},
            {"turns", turns},
            {"status", game::StatusName(s.status)},
            {"round_count", s.round_count},
            {"created_at_ms", s.created_at_ms},
            {"created_at", UtcTimestamp(s.created_at_ms)},
            {"phase", game::PhaseName(s.phase)}};
  if (s.pending_prediction) j["pending_prediction"] = ToJson(*s.pending_prediction);
  PutOpt(j, "uttered_round", s.uttered_round);
  if (s.rule_winner) j["rule_winner"] = WinnerName(*s.rule_winner);
  if (s.outcome) j["outcome"] = ToJson(*s.outcome);
  return j;
}

game::GameConfig ConfigFromJson(const Json& j) {
  return Guard("config", [&] {
    game::GameConfig c;
    c.game = game::ParseGameKind(j.at("game").get<std::string>());
    c.max_rounds = j.at("max_rounds");
    c.user_char_limit = GetOpt<int>(j, "user_char_limit");
    c.taboo_word_list =
        j.value("taboo_word_list", std::vector<std::string>{});
    c.judgment_levels =
        j.value("judgment_levels", std::vector<std::string>{});
    c.keyword_match = ParseKeywordMatch(j.value("keyword_match", "plural_fold"));
    return c;
  });
}

game::InferenceParams ParamsFromJson(const Json& j) {
  return Guard("inference_params", [&] {
    game::InferenceParams p;
    p.temperature = j.at("temperature");
    p.top_p = j.at("top_p");
    p.max_output_tokens = j.at("max_output_tokens");
    p.seed = GetOpt<std::int64_t>(j, "seed");
    return p;
  });
}

game::Session SessionFromJson(const Json& j) {
  return Guard("session", [&] {
    game::Session s;
    s.session_id = j.at("session_id");
    s.config = ConfigFromJson(j.at("config"));
    s.model_ref = j.at("model_ref");
    s.prompt_ref = j.at("prompt_ref");
    s.system_prompt = j.at("system_prompt");
    s.inference_params = ParamsFromJson(j.at("inference_params"));
    const Json& secret = j.at("secret");
    s.secret.text = GetOpt<std::string>(secret, "text");
    s.secret.statement = GetOpt<std::string>(secret, "statement");
    s.secret.truthful = GetOpt<bool>(secret, "truthful");
    for (const Json& t : j.at("turns")) s.turns.push_back(TurnFromJson(t));
    s.status = game::ParseStatus(j.at("status").get<std::string>());
    s.round_count = j.at("round_count");
    s.created_at_ms = j.at("created_at_ms");
    s.phase = game::ParsePhase(j.at("phase").get<std::string>());
    if (j.contains("pending_prediction")) {
      s.pending_prediction = PredictionFromJson(j["pending_prediction"]);
    }
    s.uttered_round = GetOpt<int>(j, "uttered_round");
    if (auto w = GetOpt<std::string>(j, "rule_winner")) {
      s.rule_winner = ParseWinner(*w);
    }
    if (j.contains("outcome")) s.outcome = OutcomeFromJson(j["outcome"]);
    return s;
  });
}

Json ToJson(const retro::RetroTrace& trace) {
  Json entries = Json::array();
  for (const retro::RetroEntry& e : trace.entries) {
    Json je = {{"round", e.round}, {"raw", e.raw}, {"failed", e.failed}};
    if (!e.error.empty()) je["error"] = e.error;
    if (e.list) {
      je["list"] = {{"items", e.list->items},
                    {"rationale", e.list->rationale},
                    {"low_confidence", e.list->low_confidence},
                    {"truncated", e.list->truncated},
                    {"unparseable", e.list->unparseable}};
    }
    if (e.judgment) {
      je["judgment"] = {{"level", e.judgment->level},
                        {"unparseable", e.judgment->unparseable}};
    }
    entries.push_back(std::move(je));
  }
  return {{"session_id", trace.session_id},
          {"game", game::GameName(trace.game)},
          {"model_ref", trace.model_ref},
          {"entries", entries}};
}

retro::RetroTrace TraceFromJson(const Json& j) {
  return Guard("trace", [&] {
    retro::RetroTrace t;
    t.session_id = j.at("session_id");
    t.game = game::ParseGameKind(j.at("game").get<std::string>());
    t.model_ref = j.at("model_ref");
    for (const Json& je : j.at("entries")) {
      retro::RetroEntry e;
      e.round = je.at("round");
      e.raw = je.at("raw");
      e.failed = je.value("failed", false);
      e.error = je.value("error", "");
      if (je.contains("list")) {
        const Json& l = je["list"];
        retro::RankedList list;
        list.items = l.at("items").get<std::vector<std::string>>();
        list.rationale = l.value("rationale", "");
        list.low_confidence = l.value("low_confidence", false);
        list.truncated = l.value("truncated", false);
        list.unparseable = l.value("unparseable", false);
        e.list = std::move(list);
      }
      if (je.contains("judgment")) {
        e.judgment = retro::Judgment{je["judgment"].at("level"),
                                     je["judgment"].value("unparseable", false)};
      }
      t.entries.push_back(std::move(e));
    }
    return t;
  });
}

Json ToJson(const metrics::OutcomeReport& r) {
  Json prompts = Json::array();
  for (const auto& p : r.per_prompt) {
    prompts.push_back({{"prompt_ref", p.prompt_ref},
                       {"sessions", p.sessions},
                       {"wins", p.wins},
                       {"win_rate", p.win_rate},
                       {"avg_rounds", p.avg_rounds}});
  }
  return {{"model", r.model},
          {"game", game::GameName(r.game)},
          {"sessions", r.sessions},
          {"wins", r.wins},
          {"total_rounds", r.total_rounds},
          {"avg_win_rate", r.avg_win_rate},
          {"avg_rounds", r.avg_rounds},
          {"prompt_win_rate_std", r.prompt_win_rate_std},
          {"prompt_rounds_std", r.prompt_rounds_std},
          {"per_prompt", prompts}};
}

Json ToJson(const metrics::ProceduralReport& r) {
  Json j = {{"model", r.model},
            {"game", game::GameName(r.game)},
            {"sessions", r.sessions},
            {"flagged_entries", r.flagged_entries},
            {"final_rank_missing", r.final_rank_missing}};
  PutOpt(j, "recall_rate", r.recall_rate);
  PutOpt(j, "top5_recall", r.top5_recall);
  PutOpt(j, "top10_recall", r.top10_recall);
  PutOpt(j, "disparity_ratio", r.disparity_ratio);
  PutOpt(j, "avg_first_appear_round", r.avg_first_appear_round);
  PutOpt(j, "avg_final_rank", r.avg_final_rank);
  PutOpt(j, "spearman_rho", r.spearman_rho);
  PutOpt(j, "hopping_penalty", r.hopping_penalty);
  PutOpt(j, "bluffing_recall", r.bluffing_recall);
  PutOpt(j, "no_verdict_rate", r.no_verdict_rate);
  return j;
}

Json ToJson(const ranking::CorrelationResult& c) {
  return {{"a", c.a},
          {"b", c.b},
          {"n", c.n},
          {"tau", c.tau},
          {"rbo", c.rbo},
          {"z_score", c.z_score},
          {"tau_p_value", c.tau_p_value},
          {"rbo_p_value", c.rbo_p_value},
          {"persistence", c.persistence}};
}

Json ToJson(const ranking::Ranking& r) {
  return {{"id", r.id},
          {"label", r.label},
          {"models", r.models},
          {"tie_break_policy", r.tie_break_policy}};
}

std::string UtcDate(std::int64_t ms) {
  using namespace std::chrono;
  auto days = floor<std::chrono::days>(sys_time<milliseconds>(milliseconds(ms)));
  year_month_day ymd{days};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string UtcTimestamp(std::int64_t ms) {
  using namespace std::chrono;
  sys_time<milliseconds> tp{milliseconds(ms)};
  auto days = floor<std::chrono::days>(tp);
  hh_mm_ss<milliseconds> t{tp - days};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d.%03dZ", UtcDate(ms).c_str(),
                static_cast<int>(t.hours().count()),
                static_cast<int>(t.minutes().count()),
                static_cast<int>(t.seconds().count()),
                static_cast<int>(t.subseconds().count()));
  return buf;
}

}  // namespace playbench::store
