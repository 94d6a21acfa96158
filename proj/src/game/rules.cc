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

#include "playbench/game/rules.h"

#include <cctype>
#include <string>
#include <vector>

#include "playbench/game/text.h"

namespace playbench::game {
namespace {

constexpr std::string_view kSeparators = " \t-:,";

std::string_view SkipSeparators(std::string_view s) {
  while (!s.empty()) {
    if (kSeparators.find(s.front()) != std::string_view::npos) {
      s.remove_prefix(1);
    } else if (s.starts_with("\u2013") || s.starts_with("\u2014")) {
      s.remove_prefix(3);
    } else {
      break;
    }
  }
  return s;
}

std::string_view UpTo(std::string_view s, std::string_view stops) {
  std::size_t end = s.find_first_of(stops);
  return end == std::string_view::npos ? s : s.substr(0, end);
}

std::optional<Prediction> ParseAkinatorGuess(std::string_view output) {
  std::size_t anchor = text::FindIgnoreCase(output, kAkinatorGuessAnchor);
  if (anchor == std::string_view::npos) return std::nullopt;
  std::string_view rest = output.substr(anchor + kAkinatorGuessAnchor.size());
  std::size_t q = text::FindIgnoreCase(rest, kAkinatorGuessQuestion);
  if (q != std::string_view::npos) {
    rest = rest.substr(q + kAkinatorGuessQuestion.size());
  }
  rest = SkipSeparators(rest);
  std::string payload = text::CleanPayload(UpTo(rest, "?\n"));
  if (payload.empty()) return std::nullopt;
  return Prediction::Guess(GameKind::kAkinator, std::move(payload));
}

std::optional<Prediction> ParseTabooGuess(std::string_view output) {
  std::size_t anchor = text::FindIgnoreCase(output, kTabooGuessAnchor);
  if (anchor == std::string_view::npos) return std::nullopt;
  std::string_view rest =
      SkipSeparators(output.substr(anchor + kTabooGuessAnchor.size()));
  std::string payload = text::CleanPayload(UpTo(rest, ".!?\n"));
  if (payload.empty()) return std::nullopt;
  return Prediction::Guess(GameKind::kTaboo, std::move(payload));
}

std::optional<Prediction> ParseBluffingVerdict(std::string_view output) {
  std::size_t anchor = text::FindIgnoreCase(output, kBluffingVerdictAnchor);
  if (anchor == std::string_view::npos) return std::nullopt;
  std::string_view rest =
      SkipSeparators(output.substr(anchor + kBluffingVerdictAnchor.size()));
  while (!rest.empty() && !text::IsWordChar(rest.front()) &&
         rest.front() != '\n') {
    rest.remove_prefix(1);
  }
  std::size_t end = 0;
  while (end < rest.size() && text::IsWordChar(rest[end])) ++end;
  std::string word = text::ToLower(rest.substr(0, end));
  if (word == "true") return Prediction::Verdict(true);
  if (word == "false") return Prediction::Verdict(false);
  return std::nullopt;
}

std::string CollapseSpaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

bool IsArticle(const std::string& w) {
  return w == "a" || w == "an" || w == "the";
}

}  // namespace

std::optional<Prediction> ParseGuess(std::string_view output, GameKind game) {
  switch (game) {
    case GameKind::kAkinator: return ParseAkinatorGuess(output);
    case GameKind::kTaboo: return ParseTabooGuess(output);
    case GameKind::kBluffing: return ParseBluffingVerdict(output);
  }
  return std::nullopt;
}

std::string FormatGuess(const Prediction& prediction) {
  switch (prediction.game) {
    case GameKind::kAkinator:
      return "This is a guess -- are you thinking of " + prediction.text() +
             "?";
    case GameKind::kTaboo:
      return "My guess of the word is: " + prediction.text();
    case GameKind::kBluffing:
      return std::string("I believe your statement is: ") +
             (prediction.verdict() ? "True" : "False");
  }
  return {};
}

std::optional<AkinatorAnswer> ParseAkinatorAnswer(std::string_view input) {
  std::string s = text::ToLower(text::CleanPayload(input));
  // Normalize typographic apostrophes.
  for (std::size_t pos; (pos = s.find("’")) != std::string::npos;) {
    s.replace(pos, std::string_view("’").size(), "'");
  }
  s = CollapseSpaces(s);
  if (s == "yes") return AkinatorAnswer::kYes;
  if (s == "no") return AkinatorAnswer::kNo;
  if (s == "probably yes") return AkinatorAnswer::kProbablyYes;
  if (s == "probably no") return AkinatorAnswer::kProbablyNo;
  if (s == "don't know" || s == "dont know" || s == "do not know" ||
      s == "not sure") {
    return AkinatorAnswer::kDontKnow;
  }
  return std::nullopt;
}

std::string_view AcceptedAnswersText() {
  return "Yes, No, Probably Yes, Probably No, Don't Know";
}

std::optional<int> ParseQuestionHeader(std::string_view output) {
  std::string_view s = text::Trim(output);
  while (!s.empty() && (s.front() == '*' || s.front() == '#')) {
    s.remove_prefix(1);
  }
  s = text::Trim(s);
  constexpr std::string_view kWord = "question";
  if (text::FindIgnoreCase(s.substr(0, kWord.size()), kWord) != 0) {
    return std::nullopt;
  }
  s.remove_prefix(kWord.size());
  s = text::Trim(s);
  int value = 0;
  std::size_t digits = 0;
  while (digits < s.size() && digits < 6 &&
         std::isdigit(static_cast<unsigned char>(s[digits])) != 0) {
    value = value * 10 + (s[digits] - '0');
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  s.remove_prefix(digits);
  while (!s.empty() && s.front() == '*') s.remove_prefix(1);
  if (s.empty() || s.front() != ':') return std::nullopt;
  return value;
}

bool PluralEquivalent(std::string_view a, std::string_view b) {
  if (a == b) return true;
  auto is_plural_of = [](std::string_view longer, std::string_view shorter) {
    if (!longer.starts_with(shorter)) return false;
    std::string_view tail = longer.substr(shorter.size());
    return tail == "s" || tail == "es";
  };
  return is_plural_of(a, b) || is_plural_of(b, a);
}

bool DetectKeyword(std::string_view text_in, std::string_view target,
                   KeywordMatch mode) {
  std::string_view trimmed = text::Trim(target);
  if (trimmed.empty()) return false;
  if (mode == KeywordMatch::kSubstring) {
    return text::FindIgnoreCase(text_in, trimmed) != std::string_view::npos;
  }
  const std::vector<std::string> needle = text::Words(trimmed);
  const std::vector<std::string> words = text::Words(text_in);
  if (needle.empty() || words.size() < needle.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= words.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j) {
      const bool last = j + 1 == needle.size();
      if (last && mode == KeywordMatch::kPluralFold) {
        match = PluralEquivalent(words[i + j], needle[j]);
      } else {
        match = words[i + j] == needle[j];
      }
    }
    if (match) return true;
  }
  return false;
}

bool NormalizedEquals(std::string_view a, std::string_view b) {
  std::vector<std::string> g = text::Words(a);
  std::vector<std::string> s = text::Words(b);
  if (!g.empty() && IsArticle(g.front()) && g.size() > 1) g.erase(g.begin());
  if (!s.empty() && IsArticle(s.front()) && s.size() > 1) s.erase(s.begin());
  if (g.empty() || g.size() != s.size()) return false;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (g[i] != s[i]) return false;
  }
  return PluralEquivalent(g.back(), s.back());
}

bool TabooGuessMatches(std::string_view guess, std::string_view secret) {
  return NormalizedEquals(guess, secret);
}

}  // namespace playbench::game
