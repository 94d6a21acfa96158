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

// Message-format rules: guess anchors, answer vocabulary, question headers
// and Taboo keyword detection.

#ifndef PLAYBENCH_GAME_RULES_H_
#define PLAYBENCH_GAME_RULES_H_

#include <optional>
#include <string>
#include <string_view>

#include "playbench/game/types.h"

namespace playbench::game {

// Anchor phrases the system prompts ask the model to use for guesses.
inline constexpr std::string_view kAkinatorGuessAnchor = "this is a guess";
inline constexpr std::string_view kAkinatorGuessQuestion = "are you thinking of";
inline constexpr std::string_view kTabooGuessAnchor = "my guess of the word is";
inline constexpr std::string_view kBluffingVerdictAnchor =
    "i believe your statement is";

// Returns the prediction when the game's anchor phrase appears anywhere in
// `output` (case-insensitive). The payload is cleaned of surrounding quotes
// and trailing punctuation.
std::optional<Prediction> ParseGuess(std::string_view output, GameKind game);

// Canonical guess text for a prediction; ParseGuess inverts it.
std::string FormatGuess(const Prediction& prediction);

// Accepts Yes, No, Probably Yes, Probably No, Don't Know (and "not sure").
std::optional<AkinatorAnswer> ParseAkinatorAnswer(std::string_view input);
std::string_view AcceptedAnswersText();

// Parses a leading "Question N:" header (after optional markdown emphasis).
std::optional<int> ParseQuestionHeader(std::string_view output);

// True iff `text` contains `target` as a whole word or phrase.
bool DetectKeyword(std::string_view text, std::string_view target,
                   KeywordMatch mode = KeywordMatch::kPluralFold);

// Two single words are equal up to a trailing "s"/"es".
bool PluralEquivalent(std::string_view a, std::string_view b);

// Case-insensitive word-token equality after dropping a leading article,
// with the plural rule on the last word. "an Electric Guitar" equals
// "electric guitars".
bool NormalizedEquals(std::string_view a, std::string_view b);

// Taboo guesses are adjudicated against the secret with NormalizedEquals.
bool TabooGuessMatches(std::string_view guess, std::string_view secret);

}  // namespace playbench::game

#endif  // PLAYBENCH_GAME_RULES_H_
