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

#include <regex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "playbench/game/random.h"
#include "playbench/game/rules.h"
#include "playbench/game/text.h"

namespace playbench::game {
namespace {

// Independent oracle: whole-phrase match with an optional "s"/"es" on the
// last word, or the target's own "s"/"es" dropped. ASCII only.
bool RegexOracle(const std::string& text, const std::string& target) {
  std::vector<std::string> words = text::Words(target);
  std::string pattern = "(^|[^a-z0-9])";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) pattern += "[^a-z0-9]+";
    const std::string& w = words[i];
    if (i + 1 < words.size()) {
      pattern += w;
      continue;
    }
    std::string alternatives = w + "(s|es)?";
    if (w.size() > 1 && w.back() == 's') {
      alternatives += "|" + w.substr(0, w.size() - 1);
    }
    if (w.size() > 2 && w.ends_with("es")) {
      alternatives += "|" + w.substr(0, w.size() - 2);
    }
    pattern += "(" + alternatives + ")";
  }
  pattern += "($|[^a-z0-9])";
  return std::regex_search(text, std::regex(pattern, std::regex::icase));
}

struct KeywordCase {
  const char* text;
  const char* target;
  bool expected;
};

const KeywordCase kCorpus[] = {
    {"I love coffee in the morning", "coffee", true},
    {"COFFEE!", "coffee", true},
    {"coffees are great", "coffee", true},
    {"coffeemaker on the desk", "coffee", false},
    {"decoffee", "coffee", false},
    {"the coffee-shop", "coffee", true},
    {"box of chocolates", "box", true},
    {"two boxes", "box", true},
    {"boxer shorts", "box", false},
    {"Samoa is an island nation", "Samoa", true},
    {"The Samoan language", "Samoa", false},
    {"samoas", "Samoa", true},
    {"Have you been to New York?", "new york", true},
    {"new yorks", "new york", true},
    {"newyork", "new york", false},
    {"new, york", "new york", true},
    {"york new", "new york", false},
    {"guitar", "guitars", true},
    {"guitars", "guitar", true},
    {"a guitarist", "guitar", false},
    {"bus stop", "buses", true},
    {"buses", "bus", true},
    {"busy", "bus", false},
    {"apple pie", "apple", true},
    {"pineapple", "apple", false},
    {"apples.", "apple", true},
    {"APPLE's logo", "apple", true},
    {"snapple", "apple", false},
    {"", "apple", false},
    {"apple", "apple", true},
    {"moon light", "moonlight", false},
    {"moonlight", "moonlight", true},
    {"the dog barked", "dog", true},
    {"dogma", "dog", false},
    {"hot dogs", "dog", true},
    {"ice cream cone", "ice cream", true},
    {"ice-cream", "ice cream", true},
    {"icecream", "ice cream", false},
    {"ice creams", "ice cream", true},
    {"cream ice", "ice cream", false},
    {"piano keys", "piano", true},
    {"pianos", "piano", true},
    {"pianoes", "piano", true},
    {"pianist", "piano", false},
    {"It's raining", "rain", false},
    {"rain, rain", "rain", true},
    {"train", "rain", false},
    {"rains", "rain", true},
    {"42 rain", "rain", true},
    {"rain42", "rain", false},
};

TEST(KeywordDetection, CorpusAgreesWithRegexOracle) {
  ASSERT_EQ(std::size(kCorpus), 50u);
  for (const KeywordCase& c : kCorpus) {
    SCOPED_TRACE(std::string(c.text) + " / " + c.target);
    EXPECT_EQ(DetectKeyword(c.text, c.target), c.expected);
    EXPECT_EQ(RegexOracle(c.text, c.target), c.expected);
  }
}

TEST(KeywordDetection, RandomSentencesAgreeWithRegexOracle) {
  const std::vector<std::string> vocab = {
      "cat", "cats", "catalog", "dog", "dogs", "sky", "box", "boxes",
      "bus", "buses", "the", "a", "New", "York", "new", "yorks", "es", "s"};
  const std::vector<std::string> seps = {" ", ", ", "-", "! ", "'", "  "};
  const std::vector<std::string> targets = {"cat", "box", "bus", "new york",
                                            "cats", "buses", "sky"};
  rng::Engine engine(20240901);
  for (int trial = 0; trial < 3000; ++trial) {
    std::string sentence;
    const int n = 1 + static_cast<int>(rng::UniformIndex(engine, 7));
    for (int i = 0; i < n; ++i) {
      if (i > 0) sentence += seps[rng::UniformIndex(engine, seps.size())];
      sentence += vocab[rng::UniformIndex(engine, vocab.size())];
    }
    const std::string& target = targets[rng::UniformIndex(engine, targets.size())];
    ASSERT_EQ(DetectKeyword(sentence, target), RegexOracle(sentence, target))
        << sentence << " / " << target;
  }
}

TEST(KeywordDetection, ModesDiffer) {
  EXPECT_FALSE(DetectKeyword("two boxes", "box", KeywordMatch::kExact));
  EXPECT_TRUE(DetectKeyword("two box", "box", KeywordMatch::kExact));
  EXPECT_TRUE(DetectKeyword("boxer", "box", KeywordMatch::kSubstring));
  EXPECT_FALSE(DetectKeyword("anything", "   ", KeywordMatch::kSubstring));
}

TEST(ParseGuess, AkinatorAnchor) {
  auto p = ParseGuess("This is a guess -- are you thinking of an electric guitar?",
                      GameKind::kAkinator);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->text(), "an electric guitar");
  EXPECT_FALSE(ParseGuess("Question 3: Is it electric?", GameKind::kAkinator));
  p = ParseGuess("**This is a guess:** \"A thimble\"?", GameKind::kAkinator);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->text(), "A thimble");
}

TEST(ParseGuess, TabooAnchor) {
  auto p = ParseGuess("Hmm. My guess of the word is: SAMOA. Right?",
                      GameKind::kTaboo);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->text(), "SAMOA");
  EXPECT_FALSE(ParseGuess("my guess of the word is:   ", GameKind::kTaboo));
}

TEST(ParseGuess, BluffingVerdict) {
  auto p = ParseGuess("I believe your statement is: **True**", GameKind::kBluffing);
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->verdict());
  p = ParseGuess("i BELIEVE your statement is false.", GameKind::kBluffing);
  ASSERT_TRUE(p);
  EXPECT_FALSE(p->verdict());
  EXPECT_FALSE(ParseGuess("I believe your statement is: Unknown",
                          GameKind::kBluffing));
}

TEST(ParseGuess, FormatRoundTrips) {
  const Prediction cases[] = {
      Prediction::Guess(GameKind::kAkinator, "a thimble"),
      Prediction::Guess(GameKind::kTaboo, "Samoa"),
      Prediction::Verdict(true),
      Prediction::Verdict(false),
  };
  for (const Prediction& p : cases) {
    auto back = ParseGuess(FormatGuess(p), p.game);
    ASSERT_TRUE(back) << FormatGuess(p);
    EXPECT_EQ(*back, p);
  }
}

TEST(AkinatorAnswers, Vocabulary) {
  EXPECT_EQ(ParseAkinatorAnswer("Yes"), AkinatorAnswer::kYes);
  EXPECT_EQ(ParseAkinatorAnswer(" no. "), AkinatorAnswer::kNo);
  EXPECT_EQ(ParseAkinatorAnswer("Probably   yes"), AkinatorAnswer::kProbablyYes);
  EXPECT_EQ(ParseAkinatorAnswer("PROBABLY NO"), AkinatorAnswer::kProbablyNo);
  EXPECT_EQ(ParseAkinatorAnswer("Don’t know"), AkinatorAnswer::kDontKnow);
  EXPECT_EQ(ParseAkinatorAnswer("not sure"), AkinatorAnswer::kDontKnow);
  EXPECT_FALSE(ParseAkinatorAnswer("maybe"));
  EXPECT_FALSE(ParseAkinatorAnswer("yes it is"));
}

TEST(QuestionHeader, Parses) {
  EXPECT_EQ(ParseQuestionHeader("Question 1: Is it alive?"), 1);
  EXPECT_EQ(ParseQuestionHeader("**Question 12:** Is it red?"), 12);
  EXPECT_EQ(ParseQuestionHeader("  question 3: metal?"), 3);
  EXPECT_FALSE(ParseQuestionHeader("Q3: metal?"));
  EXPECT_FALSE(ParseQuestionHeader("Question: metal?"));
  EXPECT_FALSE(ParseQuestionHeader("My question 3: metal?"));
}

TEST(NormalizedEquals, ArticlesCaseAndPlural) {
  EXPECT_TRUE(NormalizedEquals("an Electric Guitar", "electric guitars"));
  EXPECT_TRUE(NormalizedEquals("SAMOA", "Samoa"));
  EXPECT_TRUE(NormalizedEquals("the thimble", "a thimble"));
  EXPECT_FALSE(NormalizedEquals("guitar", "electric guitar"));
  EXPECT_FALSE(NormalizedEquals("Samoan", "Samoa"));
  EXPECT_FALSE(NormalizedEquals("", "a"));
}

TEST(Text, Utf8LengthCountsCodePoints) {
  EXPECT_EQ(text::Utf8Length("abc"), 3u);
  EXPECT_EQ(text::Utf8Length("caf\xC3\xA9"), 4u);
  EXPECT_EQ(text::Utf8Length("\xF0\x9F\x98\x80"), 1u);
}

}  // namespace
}  // namespace playbench::game
