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

#include <atomic>
#include <filesystem>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "playbench/service/http_server.h"
#include "support/corpus.h"

namespace playbench::service {
namespace {

namespace fs = std::filesystem;

const sim::Platform& Shipped() {
  static const sim::Platform platform = testing::LoadShippedPlatform();
  return platform;
}

// Delegates to the simulated models, or fails while `down` is set.
class SwitchableClient : public gateway::ChatClient {
 public:
  SwitchableClient() : inner_(sim::BuildGateway(Shipped())) {}
  std::string Complete(const gateway::ModelRef& model,
                       std::string_view system_prompt,
                       const std::vector<gateway::ChatMessage>& messages,
                       const game::InferenceParams& params) override {
    ++calls;
    if (down) {
      throw gateway::GatewayError(gateway::GatewayError::Kind::kTransport,
                                  "connection refused by " + model.id);
    }
    return inner_->Complete(model, system_prompt, messages, params);
  }
  std::atomic<bool> down{false};
  std::atomic<int> calls{0};

 private:
  std::shared_ptr<gateway::Gateway> inner_;
};

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest()
      : root_(fs::temp_directory_path() /
              ("playbench-service-" + std::to_string(::getpid()) + "-" +
               ::testing::UnitTest::GetInstance()->current_test_info()->name())),
        store_((fs::remove_all(root_), root_)),
        client_(std::make_shared<SwitchableClient>()),
        service_(Shipped(), client_, store_, Options(), [this] { return now_.load(); }) {}
  ~ServiceTest() override { fs::remove_all(root_); }

  static ServiceOptions Options() {
    ServiceOptions o;
    o.seed = 123;
    return o;
  }

  // Fails the test if any response of an active session names a model.
  void CheckAnonymous(const Json& response) {
    if (response.value("status", "") != "active") return;
    const std::string text = response.dump();
    for (const auto& m : Shipped().config.models) {
      EXPECT_EQ(text.find(m.id), std::string::npos) << m.id << " in " << text;
    }
  }

  ApiError Expect(const std::function<void()>& f) {
    try {
      f();
    } catch (const ApiError& e) {
      return e;
    }
    ADD_FAILURE() << "no ApiError";
    return ApiError("none", "", false, 0);
  }

  // Plays a session to the end with simple scripted input.
  Json PlayOut(Json view, bool reveal = true) {
    for (int step = 0; step < 200 && view["status"] == "active"; ++step) {
      CheckAnonymous(view);
      const std::string id = view["session_id"];
      const std::string awaiting = view["awaiting"];
      if (awaiting == "outcome") {
        Json body = {{"feedback", "confirmed_correct"}};
        if (reveal) body["revealed_secret"] = "a teapot";
        view = service_.PostOutcome(id, body);
      } else if (awaiting == "answer") {
        view = service_.PostMessage(
            id, {{"text", view["game"] == "bluffing" ? "It was a sunny day."
                                                      : "No"}});
      } else if (awaiting == "clue") {
        view = service_.PostMessage(id, {{"text", "Think of something else."}});
      } else if (awaiting == "statement") {
        view = service_.PostMessage(id, {{"text", "I once swam with dolphins."}});
      } else {
        ADD_FAILURE() << "stuck awaiting " << awaiting;
        break;
      }
    }
    return view;
  }

  fs::path root_;
  store::SessionStore store_;
  std::shared_ptr<SwitchableClient> client_;
  std::atomic<std::int64_t> now_{1'790'000'000'000};
  ArenaService service_;
};

// ----------------------------------------------------------------- start

TEST_F(ServiceTest, TabooStartShowsWordAndBudget) {
  Json v = service_.StartSession({{"game", "taboo"}});
  EXPECT_EQ(v["game"], "taboo");
  EXPECT_EQ(v["status"], "active");
  EXPECT_EQ(v["awaiting"], "clue");
  EXPECT_EQ(v["char_budget"], 140);
  EXPECT_TRUE(v["secret_word"].is_string());
  EXPECT_TRUE(v["transcript"].empty());
  EXPECT_FALSE(v.contains("model"));
  EXPECT_EQ(client_->calls, 0);
}

TEST_F(ServiceTest, AkinatorStartAsksFirstQuestion) {
  Json v = service_.StartSession({{"game", "akinator"}});
  ASSERT_EQ(v["transcript"].size(), 2u);
  EXPECT_EQ(v["transcript"][0]["role"], "user");
  EXPECT_EQ(v["transcript"][0]["content"], kAkinatorOpening);
  EXPECT_EQ(v["transcript"][1]["role"], "model");
  EXPECT_NE(v["transcript"][1]["content"].get<std::string>().find("Question 1"),
            std::string::npos);
  EXPECT_EQ(v["awaiting"], "answer");
  EXPECT_EQ(v["rounds_used"], 1);
  CheckAnonymous(v);
}

TEST_F(ServiceTest, BluffingStartWaitsForStatement) {
  Json v = service_.StartSession({{"game", "bluffing"}, {"truthful", false}});
  EXPECT_EQ(v["awaiting"], "statement");
  EXPECT_TRUE(v["transcript"].empty());
}

TEST_F(ServiceTest, BadStartRequests) {
  EXPECT_EQ(Expect([&] { service_.StartSession({{"game", "chess"}}); }).code(),
            kInvalidRequest);
  EXPECT_EQ(Expect([&] { service_.StartSession({{"game", "chess"}}); }).http_status(),
            400);
}

// -------------------------------------------------------------- full games

TEST_F(ServiceTest, EveryGamePlaysToTheEndAndPersists) {
  for (const char* g : {"akinator", "taboo", "bluffing"}) {
    Json start = {{"game", g}};
    if (std::string(g) == "bluffing") start["truthful"] = true;
    Json v = PlayOut(service_.StartSession(start));
    ASSERT_NE(v["status"], "active") << g;
    EXPECT_EQ(v["awaiting"], "nothing");
    EXPECT_TRUE(v["model"].is_string()) << "model is revealed at the end";
    EXPECT_TRUE(v["outcome"].is_object());

    const std::string id = v["session_id"];
    auto record = store_.Get(id);
    ASSERT_TRUE(record.has_value()) << g;
    EXPECT_EQ(record->completeness, store::Completeness::kCompleteWithFeedback);
    // The served transcript is the stored one.
    const auto& turns = record->session.turns;
    ASSERT_EQ(v["transcript"].size(), turns.size());
    for (std::size_t i = 0; i < turns.size(); ++i) {
      EXPECT_EQ(v["transcript"][i]["content"], turns[i].content);
      EXPECT_EQ(v["transcript"][i]["role"], game::RoleName(turns[i].role));
    }
    EXPECT_EQ(service_.GetSession(id), v);
    ApiError late = Expect([&] { service_.PostMessage(id, {{"text", "more"}}); });
    EXPECT_EQ(late.code(), "session_finished");
    EXPECT_EQ(late.http_status(), 409);
  }
}

TEST_F(ServiceTest, TabooUserSayingTheWordEndsTheSession) {
  Json v = service_.StartSession({{"game", "taboo"}});
  const std::string word = v["secret_word"];
  v = service_.PostMessage(v["session_id"], {{"text", "It is " + word + "."}});
  EXPECT_NE(v["status"], "active");
  EXPECT_TRUE(v["outcome"]["rule_violation"].is_string());
  EXPECT_EQ(v["outcome"]["winner"], "model");
  EXPECT_TRUE(store_.Contains(v["session_id"]));
}

// --------------------------------------------------------------- errors

TEST_F(ServiceTest, InputErrorsMapToStatusCodes) {
  Json t = service_.StartSession({{"game", "taboo"}});
  const std::string tid = t["session_id"];
  ApiError empty = Expect([&] { service_.PostMessage(tid, {{"text", "   "}}); });
  EXPECT_EQ(empty.code(), "empty_input");
  EXPECT_EQ(empty.http_status(), 422);
  ApiError longer =
      Expect([&] { service_.PostMessage(tid, {{"text", std::string(141, 'x')}}); });
  EXPECT_EQ(longer.code(), "char_limit_exceeded");
  EXPECT_EQ(longer.http_status(), 422);
  ApiError early = Expect([&] {
    service_.PostOutcome(tid, {{"feedback", "confirmed_correct"}});
  });
  EXPECT_EQ(early.http_status(), 409);
  ApiError feedback = Expect([&] { service_.PostOutcome(tid, {{"feedback", "maybe"}}); });
  EXPECT_EQ(feedback.code(), kInvalidRequest);
  ApiError missing = Expect([&] { service_.PostMessage(tid, Json::object()); });
  EXPECT_EQ(missing.code(), kInvalidRequest);

  Json a = service_.StartSession({{"game", "akinator"}});
  ApiError unparsed = Expect([&] { service_.PostMessage(a["session_id"], {{"text", "purple"}}); });
  EXPECT_EQ(unparsed.code(), "unparseable_answer");
  EXPECT_EQ(unparsed.http_status(), 422);

  ApiError unknown = Expect([&] { service_.GetSession("s-nope"); });
  EXPECT_EQ(unknown.code(), kNotFound);
  EXPECT_EQ(unknown.http_status(), 404);
  EXPECT_EQ(unknown.ToJson()["error"]["code"], kNotFound);
  EXPECT_EQ(unknown.ToJson()["error"]["retryable"], false);
}

TEST(ErrorMappingTest, EveryGameErrorHasACodeAndStatus) {
  using game::ErrorCode;
  const std::map<ErrorCode, int> want = {
      {ErrorCode::kInvalidConfig, 400},       {ErrorCode::kEmptyWordList, 400},
      {ErrorCode::kDuplicateSessionId, 409},  {ErrorCode::kSessionFinished, 409},
      {ErrorCode::kEmptyInput, 422},          {ErrorCode::kCharLimitExceeded, 422},
      {ErrorCode::kUnparseableAnswer, 422},   {ErrorCode::kNotUsersTurn, 409},
      {ErrorCode::kNotModelsTurn, 409},       {ErrorCode::kAwaitingFeedback, 409},
      {ErrorCode::kPredictionPending, 409},   {ErrorCode::kNoPendingPrediction, 409},
      {ErrorCode::kMissingRevealedSecret, 422}, {ErrorCode::kGameNotOver, 409},
      {ErrorCode::kStatementMismatch, 422},
  };
  std::set<std::string> codes;
  for (const auto& [code, status] : want) {
    ApiError e = FromGameError(game::GameError(code, "msg"));
    EXPECT_EQ(e.code(), game::ErrorCodeName(code));
    EXPECT_EQ(e.http_status(), status) << e.code();
    EXPECT_FALSE(e.retryable());
    codes.insert(e.code());
  }
  EXPECT_EQ(codes.size(), want.size());
}

// ---------------------------------------------------- model failure/retry

TEST_F(ServiceTest, ModelFailureIsRetryable) {
  client_->down = true;
  Json v = service_.StartSession({{"game", "akinator"}});
  EXPECT_EQ(v["model_retry_needed"], true);
  EXPECT_EQ(v["awaiting"], "model_retry");
  const std::string id = v["session_id"];

  ApiError failed = Expect([&] { service_.PostMessage(id, {{"retry", true}}); });
  EXPECT_EQ(failed.code(), kModelUnavailable);
  EXPECT_EQ(failed.http_status(), 503);
  EXPECT_TRUE(failed.retryable());
  for (const auto& m : Shipped().config.models) {
    EXPECT_EQ(std::string(failed.what()).find(m.id), std::string::npos);
  }
  EXPECT_EQ(Expect([&] { service_.PostMessage(id, {{"text", "No"}}); }).http_status(),
            409);

  client_->down = false;
  v = service_.PostMessage(id, {{"retry", true}});
  EXPECT_FALSE(v.value("model_retry_needed", false));
  EXPECT_EQ(v["awaiting"], "answer");
  EXPECT_EQ(v["transcript"].size(), 2u);
  EXPECT_EQ(Expect([&] { service_.PostMessage(id, {{"retry", true}}); }).http_status(),
            409);
}

TEST_F(ServiceTest, FailureAfterUserTurnKeepsTheTurn) {
  Json v = service_.StartSession({{"game", "akinator"}});
  const std::string id = v["session_id"];
  client_->down = true;
  EXPECT_EQ(Expect([&] { service_.PostMessage(id, {{"text", "No"}}); }).code(),
            kModelUnavailable);
  v = service_.GetSession(id);
  EXPECT_EQ(v["transcript"].size(), 3u);
  EXPECT_EQ(v["awaiting"], "model_retry");
  client_->down = false;
  v = service_.PostMessage(id, {{"retry", true}});
  EXPECT_EQ(v["transcript"].size(), 4u);
}

// ------------------------------------------------------------ idempotency

TEST_F(ServiceTest, IdempotencyKeysReplayResponses) {
  Json a = service_.StartSession({{"game", "taboo"}}, "k1");
  Json b = service_.StartSession({{"game", "taboo"}}, "k1");
  EXPECT_EQ(a, b);
  EXPECT_EQ(service_.Health()["active_sessions"], 1);
  Json c = service_.StartSession({{"game", "taboo"}}, "k2");
  EXPECT_NE(a["session_id"], c["session_id"]);

  const std::string id = a["session_id"];
  Json m1 = service_.PostMessage(id, {{"text", "A small hint."}}, "m");
  Json m2 = service_.PostMessage(id, {{"text", "A small hint."}}, "m");
  EXPECT_EQ(m1, m2);
  EXPECT_EQ(service_.GetSession(id)["transcript"], m1["transcript"]);
}

// ----------------------------------------------------------------- expiry

TEST_F(ServiceTest, IdleSessionsExpireAfterADay) {
  Json v = service_.StartSession({{"game", "taboo"}});
  const std::string id = v["session_id"];
  now_ += 23LL * 3600 * 1000;
  EXPECT_EQ(service_.ExpireStale(), 0);
  service_.PostMessage(id, {{"text", "Round and sweet."}});
  now_ += 23LL * 3600 * 1000;
  EXPECT_EQ(service_.ExpireStale(), 0);
  now_ += 2LL * 3600 * 1000;
  EXPECT_EQ(service_.ExpireStale(), 1);
  auto record = store_.Get(id);
  ASSERT_TRUE(record.has_value());
  EXPECT_EQ(record->session.status, game::SessionStatus::kAbandoned);
  EXPECT_EQ(record->completeness, store::Completeness::kIncomplete);
  EXPECT_EQ(service_.GetSession(id)["status"], "abandoned");
  EXPECT_EQ(Expect([&] { service_.PostMessage(id, {{"text", "hi"}}); }).code(),
            "session_finished");
  EXPECT_EQ(service_.Health()["active_sessions"], 0);
}

// ------------------------------------------------------------ leaderboard

TEST_F(ServiceTest, LeaderboardNeedsDataThenRanks) {
  ApiError none = Expect([&] { service_.Leaderboard({}, {}); });
  EXPECT_EQ(none.code(), kNoData);
  EXPECT_EQ(none.http_status(), 404);

  testing::Corpus c = testing::SimulatedCorpus(120, 44);
  for (const auto& r : c.records) store_.Append(r);
  for (const auto& t : c.traces) store_.AppendTrace(t);
  Json all = service_.Leaderboard({}, {});
  ASSERT_FALSE(all["leaderboard"].empty());
  std::set<std::string> families;
  for (const auto& e : all["leaderboard"]) {
    families.insert(e["family"]);
    int rank = 0;
    for (const auto& m : e["models"]) EXPECT_EQ(m["rank"], ++rank);
  }
  EXPECT_EQ(families, (std::set<std::string>{"outcome", "retro"}));

  Json taboo = service_.Leaderboard("taboo", "outcome");
  ASSERT_EQ(taboo["leaderboard"].size(), 1u);
  EXPECT_EQ(taboo["leaderboard"][0]["game"], "taboo");
  EXPECT_EQ(taboo["leaderboard"][0]["ranking"]["id"], "taboo-outcome");
  EXPECT_EQ(Expect([&] { service_.Leaderboard("golf", {}); }).code(), kInvalidRequest);
  EXPECT_EQ(Expect([&] { service_.Leaderboard({}, "vibes"); }).code(), kInvalidRequest);
}

TEST_F(ServiceTest, HealthListsModels) {
  Json h = service_.Health();
  EXPECT_EQ(h["status"], "ok");
  EXPECT_EQ(h["models"], Shipped().config.models.size());
}

// ------------------------------------------------------------------- http

TEST_F(ServiceTest, HttpEndpoints) {
  HttpServer server(service_);
  const int port = server.Bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread serving([&] { server.Serve(); });
  server.WaitUntilReady();
  httplib::Client cli("127.0.0.1", port);

  auto health = cli.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(Json::parse(health->body)["status"], "ok");

  httplib::Headers key = {{"Idempotency-Key", "h1"}};
  auto created = cli.Post("/v1/sessions", key, R"({"game":"taboo"})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  Json view = Json::parse(created->body);
  auto again = cli.Post("/v1/sessions", key, R"({"game":"taboo"})", "application/json");
  EXPECT_EQ(Json::parse(again->body)["session_id"], view["session_id"]);
  const std::string base = "/v1/sessions/" + view["session_id"].get<std::string>();

  auto got = cli.Get(base.c_str());
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(Json::parse(got->body), view);

  auto msg = cli.Post((base + "/messages").c_str(), R"({"text":"A warm place."})",
                      "application/json");
  ASSERT_TRUE(msg);
  EXPECT_EQ(msg->status, 200);
  EXPECT_EQ(Json::parse(msg->body)["transcript"].size(), 2u);

  auto too_long = cli.Post((base + "/messages").c_str(),
                           Json{{"text", std::string(200, 'y')}}.dump(),
                           "application/json");
  EXPECT_EQ(too_long->status, 422);
  EXPECT_EQ(Json::parse(too_long->body)["error"]["code"], "char_limit_exceeded");

  auto early = cli.Post((base + "/outcome").c_str(),
                        R"({"feedback":"confirmed_correct"})", "application/json");
  EXPECT_EQ(early->status, 409);

  auto bad_json = cli.Post("/v1/sessions", "{not json", "application/json");
  EXPECT_EQ(bad_json->status, 400);
  EXPECT_EQ(Json::parse(bad_json->body)["error"]["code"], kInvalidRequest);

  auto missing = cli.Get("/v1/sessions/s-missing");
  EXPECT_EQ(missing->status, 404);
  auto nowhere = cli.Get("/v2/elsewhere");
  EXPECT_EQ(nowhere->status, 404);
  EXPECT_EQ(Json::parse(nowhere->body)["error"]["code"], kNotFound);

  auto board = cli.Get("/v1/leaderboard?game=taboo&family=outcome");
  EXPECT_EQ(board->status, 404);
  EXPECT_EQ(Json::parse(board->body)["error"]["code"], kNoData);

  server.Stop();
  serving.join();
}

}  // namespace
}  // namespace playbench::service
