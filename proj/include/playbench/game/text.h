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

// Small string helpers shared by the parsers. ASCII case folding only;
// bytes >= 0x80 are treated as word characters so UTF-8 words stay intact.

#ifndef PLAYBENCH_GAME_TEXT_H_
#define PLAYBENCH_GAME_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace playbench::text {

std::string ToLower(std::string_view s);
std::string_view Trim(std::string_view s);
bool IsBlank(std::string_view s);

// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t Utf8Length(std::string_view s);

bool IsWordChar(char c);

// Lowercased maximal runs of word characters.
std::vector<std::string> Words(std::string_view s);

// Case-insensitive search; returns npos when absent.
std::size_t FindIgnoreCase(std::string_view haystack, std::string_view needle,
                           std::size_t from = 0);

// Strips whitespace, surrounding quotes/asterisks and trailing punctuation.
std::string CleanPayload(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace playbench::text

#endif  // PLAYBENCH_GAME_TEXT_H_
