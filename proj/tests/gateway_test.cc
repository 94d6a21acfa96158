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

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "playbench/gateway/gateway.h"
#include "playbench/gateway/http_client.h"
#include "playbench/gateway/mock.h"

namespace playbench::gateway {
namespace {

using ::testing::HasSubstr;
using ::testing::Not;

// Pearson statistic against a uniform expectation; fails when it exceeds
// the 0.999 quantile.
void ExpectUniform(const std::vector<int>& counts, const std::string& what) {
  double total = 0;
  for (int c : counts) total += c;
  const double expected = total / counts.size();
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999)) << what;
}

std::vector<ModelRef> Models(int n) {
  std::vector<ModelRef> out;
  for (int i = 0; i < n; ++i) {
    ModelRef m;
    m.id = "model-" + std::to_string(i);
    m.script = "sim:x";
    out.push_back(m);
  }
  return out;
}

std::vector<PromptRef> Prompts() {
  return {{"akinator/a", game::GameKind::kAkinator, "A"},
          {"akinator/b", game::GameKind::kAkinator, "B"},
          {"taboo/a", game::GameKind::kTaboo, "T"},
          {"bluffing/a", game::GameKind::kBluffing, "X"},
          {"bluffing/b", game::GameKind::kBluffing, "Y"},
          {"bluffing/c", game::GameKind::kBluffing, "Z"}};
}

TEST(Pairing, UniformOverGamesModelsAndPrompts) {
  const std::vector<game::GameKind> games(std::begin(game::kAllGames),
                                          std::end(game::kAllGames));
  const auto models = Models(5);
  const auto prompts = Prompts();
  std::vector<int> by_game(3), by_model(5);
  std::map<std::string, int> by_prompt;
  constexpr int kDraws = 30000;
  for (int seed = 0; seed < kDraws; ++seed) {
    Pairing p = PairRandomly(games, models, prompts, seed);
    ++by_game[static_cast<int>(p.game)];
    ++by_model[std::stoi(p.model.id.substr(6))];
    ++by_prompt[p.prompt.id];
    ASSERT_EQ(p.prompt.game, p.game);
  }
  ExpectUniform(by_game, "games");
  ExpectUniform(by_model, "models");
  ExpectUniform({by_prompt["akinator/a"], by_prompt["akinator/b"]}, "akinator");
  ExpectUniform({by_prompt["bluffing/a"], by_prompt["bluffing/b"],
                 by_prompt["bluffing/c"]},
                "bluffing");
}

TEST(Pairing, SkipsGamesWithoutPromptsAndIsSeeded) {
  std::vector<PromptRef> prompts = {{"taboo/a", game::GameKind::kTaboo, "T"}};
  for (int seed = 0; seed < 50; ++seed) {
    Pairing p = PairRandomly({game::GameKind::kAkinator, game::GameKind::kTaboo},
                             Models(3), prompts, seed);
    EXPECT_EQ(p.game, game::GameKind::kTaboo);
    Pairing q = PairRandomly({game::GameKind::kAkinator, game::GameKind::kTaboo},
                             Models(3), prompts, seed);
    EXPECT_EQ(p.model, q.model);
  }
  EXPECT_THROW(PairRandomly({game::GameKind::kAkinator}, Models(3), prompts, 1),
               game::GameError);
  EXPECT_THROW(PairRandomly({game::GameKind::kTaboo}, {}, prompts, 1),
               game::GameError);
}

// Transport double that replays canned statuses and records requests.
struct FakeTransport {
  std::vector<HttpResponse> responses;
  std::vector<HttpRequest> requests;

  Transport AsTransport() {
    return [this](const HttpRequest& r) {
      requests.push_back(r);
      if (requests.size() > responses.size()) return responses.back();
      return responses[requests.size() - 1];
    };
  }
};

HttpResponse Ok(const std::string& text) {
  nlohmann::json body = {
      {"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}};
  return {200, body.dump(), ""};
}

ModelRef Remote() {
  ModelRef m;
  m.id = "remote-model";
  m.flavor = ApiFlavor::kOpenAiCompatible;
  m.endpoint = "https://api.example.test/v1/";
  m.auth_env = "TEST_API_KEY";
  m.remote_model = "provider/model-x";
  return m;
}

constexpr char kSecretKey[] = "sk-test-9f8e7d6c5b4a";

struct ClientHarness {
  FakeTransport transport;
  std::vector<double> sleeps;
  double now = 0.0;

  HttpChatClient Client(RetryPolicy policy = {}) {
    return HttpChatClient(
        policy, transport.AsTransport(),
        [this](double s) {
          sleeps.push_back(s);
          now += s;
        },
        [this] { return now; },
        [](const std::string& name) {
          return name == "TEST_API_KEY" ? std::string(kSecretKey)
                                        : std::string();
        });
  }
};

const std::vector<ChatMessage> kHello = {{game::Role::kUser, "hello"}};

TEST(HttpChatClient, RetriesWithBackoffThenSucceeds) {
  ClientHarness h;
  h.transport.responses = {{503, "", ""}, {429, "", ""}, Ok("hi there")};
  auto client = h.Client();
  EXPECT_EQ(client.Complete(Remote(), "sys", kHello, {}), "hi there");
  EXPECT_EQ(h.transport.requests.size(), 3u);
  EXPECT_EQ(h.sleeps, (std::vector<double>{1.0, 2.0}));
}

TEST(HttpChatClient, GivesUpAfterThreeAttempts) {
  ClientHarness h;
  h.transport.responses = {{500, "", ""}};
  auto client = h.Client();
  try {
    client.Complete(Remote(), "sys", kHello, {});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::kProvider);
    EXPECT_EQ(e.status(), 500);
  }
  EXPECT_EQ(h.transport.requests.size(), 3u);
}

TEST(HttpChatClient, ClientErrorsAreNotRetried) {
  ClientHarness h;
  h.transport.responses = {{401, "", ""}};
  auto client = h.Client();
  EXPECT_THROW(client.Complete(Remote(), "sys", kHello, {}), GatewayError);
  EXPECT_EQ(h.transport.requests.size(), 1u);
  EXPECT_TRUE(h.sleeps.empty());
}

TEST(HttpChatClient, UnreachableIsTransportError) {
  ClientHarness h;
  h.transport.responses = {{0, "", "connection refused"}};
  auto client = h.Client();
  try {
    client.Complete(Remote(), "sys", kHello, {});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::kTransport);
  }
}

TEST(HttpChatClient, TotalTimeoutStopsRetries) {
  ClientHarness h;
  h.transport.responses = {{503, "", ""}};
  RetryPolicy policy;
  policy.total_timeout_seconds = 1.5;
  auto client = h.Client(policy);
  try {
    client.Complete(Remote(), "sys", kHello, {});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::kTimeout);
  }
  EXPECT_EQ(h.transport.requests.size(), 2u);
}

TEST(HttpChatClient, RequestShape) {
  ClientHarness h;
  h.transport.responses = {Ok("x")};
  auto client = h.Client();
  game::InferenceParams params;
  params.seed = 42;
  std::vector<ChatMessage> msgs = {{game::Role::kUser, "hi"},
                                   {game::Role::kModel, "Question 1: ?"},
                                   {game::Role::kUser, "Yes"}};
  client.Complete(Remote(), "be brief", msgs, params);
  const HttpRequest& r = h.transport.requests.at(0);
  EXPECT_EQ(r.base_url, "https://api.example.test");
  EXPECT_EQ(r.path, "/v1/chat/completions");
  auto body = nlohmann::json::parse(r.body);
  EXPECT_EQ(body["model"], "provider/model-x");
  EXPECT_EQ(body["seed"], 42);
  ASSERT_EQ(body["messages"].size(), 4u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][2]["role"], "assistant");
}

TEST(HttpChatClient, MissingKeyIsReportedByName) {
  ClientHarness h;
  h.transport.responses = {Ok("x")};
  auto client = h.Client();
  ModelRef m = Remote();
  m.auth_env = "UNSET_VARIABLE";
  try {
    client.Complete(m, "sys", kHello, {});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_THAT(e.what(), HasSubstr("UNSET_VARIABLE"));
  }
  EXPECT_TRUE(h.transport.requests.empty());
}

// The key may only travel in the Authorization header: never in bodies,
// error messages or log lines.
TEST(HttpChatClient, KeyNeverLeaks) {
  std::ostringstream log;
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(log);
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(std::make_shared<spdlog::logger>("scan", sink));

  std::vector<std::string> surfaces;
  for (int status : {500, 401, 0}) {
    ClientHarness h;
    h.transport.responses = {{status, "", "refused"}};
    auto client = h.Client();
    try {
      client.Complete(Remote(), "sys", kHello, {});
    } catch (const GatewayError& e) {
      surfaces.push_back(e.what());
    }
    for (const auto& r : h.transport.requests) {
      surfaces.push_back(r.body);
      surfaces.push_back(r.base_url + r.path);
      int auth = 0;
      for (const auto& [k, v] : r.headers) {
        if (k == "Authorization") {
          ++auth;
          EXPECT_EQ(v, std::string("Bearer ") + kSecretKey);
        } else {
          surfaces.push_back(v);
        }
      }
      EXPECT_EQ(auth, 1);
    }
  }
  spdlog::set_default_logger(previous);
  surfaces.push_back(log.str());
  EXPECT_FALSE(log.str().empty());
  for (const auto& s : surfaces) EXPECT_THAT(s, Not(HasSubstr(kSecretKey)));
}

TEST(Completion, ParseErrors) {
  EXPECT_EQ(ParseCompletionText(Ok("abc").body), "abc");
  EXPECT_THROW(ParseCompletionText("not json"), GatewayError);
  EXPECT_THROW(ParseCompletionText(R"({"choices": []})"), GatewayError);
  EXPECT_THROW(ParseCompletionText(R"({"choices": [{"message": {}}]})"),
               GatewayError);
}

TEST(Completion, SplitUrl) {
  EXPECT_EQ(SplitUrl("http://localhost:8000/v1"),
            (std::pair<std::string, std::string>{"http://localhost:8000", "/v1"}));
  EXPECT_EQ(SplitUrl("https://h"),
            (std::pair<std::string, std::string>{"https://h", ""}));
}

TEST(Messages, MustAlternateFromUser) {
  EXPECT_NO_THROW(ValidateMessages(kHello));
  EXPECT_THROW(ValidateMessages({{game::Role::kModel, "x"}}), GatewayError);
  EXPECT_THROW(ValidateMessages({{game::Role::kUser, "a"}, {game::Role::kUser, "b"}}),
               GatewayError);
}

TEST(TokenBucket, SpacesRequestsAtTheConfiguredRate) {
  double now = 0;
  std::vector<double> sleeps;
  TokenBucket bucket(
      30.0, [&] { return now; },
      [&](double s) {
        sleeps.push_back(s);
        now += s;
      });
  for (int i = 0; i < 4; ++i) bucket.Acquire();
  // One token up front, then one every two seconds.
  EXPECT_DOUBLE_EQ(now, 6.0);
  EXPECT_EQ(sleeps.size(), 3u);
}

class EchoClient : public ChatClient {
 public:
  int calls = 0;
  std::string Complete(const ModelRef& model, std::string_view,
                       const std::vector<ChatMessage>& messages,
                       const game::InferenceParams&) override {
    ++calls;
    return model.id + ":" + messages.back().content;
  }
};

TEST(Gateway, RoutesByModelId) {
  Gateway g([] { return 0.0; }, [](double) {});
  auto echo = std::make_shared<EchoClient>();
  ModelRef m = Models(1)[0];
  g.Register(m, echo);
  EXPECT_TRUE(g.Has(m.id));
  EXPECT_EQ(g.Complete(m, "", kHello, {}), "model-0:hello");
  ModelRef other = Models(2)[1];
  try {
    g.Complete(other, "", kHello, {});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::kUnknownModel);
  }
  ModelRef bad;
  EXPECT_THROW(g.Register(bad, echo), game::GameError);
}

TEST(ScriptedModel, KeyedByOpeningAndTurnCount) {
  ScriptedModel model = ScriptedModel::FromJsonText(R"({"conversations": [
    {"opening": "hi", "replies": ["one", "two"],
     "retro": {"1": "list after one"}}]})");
  ModelRef m = Models(1)[0];
  std::vector<ChatMessage> msgs = {{game::Role::kUser, "hi"}};
  EXPECT_EQ(model.Complete(m, "", msgs, {}), "one");
  msgs.push_back({game::Role::kModel, "one"});
  msgs.push_back({game::Role::kUser, "ok"});
  EXPECT_EQ(model.Complete(m, "", msgs, {}), "two");
  msgs.push_back({game::Role::kModel, "two"});
  msgs.push_back({game::Role::kUser, "ok"});
  EXPECT_THROW(model.Complete(m, "", msgs, {}), GatewayError);

  std::vector<ChatMessage> retro = {
      {game::Role::kUser, "hi"},
      {game::Role::kModel, "one"},
      {game::Role::kUser, std::string(kRetroMarker) + ", list candidates."}};
  EXPECT_EQ(model.Complete(m, "", retro, {}), "list after one");
  EXPECT_THROW(model.Complete(m, "", {{game::Role::kUser, "other"}}, {}),
               GatewayError);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace playbench::gateway
