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

#include "playbench/game/text.h"

#include <algorithm>
#include <cctype>

namespace playbench::text {

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool IsBlank(std::string_view s) { return Trim(s).empty(); }

std::size_t Utf8Length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

bool IsWordChar(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

std::vector<std::string> Words(std::string_view s) {
  std::vector<std::string> words;
  std::string current;
  for (char c : s) {
    if (IsWordChar(c)) {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::size_t FindIgnoreCase(std::string_view haystack, std::string_view needle,
                           std::size_t from) {
  if (needle.empty()) return from <= haystack.size() ? from : std::string::npos;
  if (haystack.size() < needle.size()) return std::string::npos;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (std::tolower(static_cast<unsigned char>(haystack[i + j])) !=
          std::tolower(static_cast<unsigned char>(needle[j]))) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string::npos;
}

std::string CleanPayload(std::string_view s) {
  constexpr std::string_view kWrap = "\"'`* \t\r\n";
  constexpr std::string_view kTrailing = ".,;:!?";
  constexpr std::string_view kCurly[] = {"“", "”", "‘",
                                         "’"};
  auto strip_curly_front = [&](std::string_view& v) {
    for (auto q : kCurly) {
      if (v.starts_with(q)) {
        v.remove_prefix(q.size());
        return true;
      }
    }
    return false;
  };
  auto strip_curly_back = [&](std::string_view& v) {
    for (auto q : kCurly) {
      if (v.ends_with(q)) {
        v.remove_suffix(q.size());
        return true;
      }
    }
    return false;
  };
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    if (!s.empty() && kWrap.find(s.front()) != std::string_view::npos) {
      s.remove_prefix(1);
      changed = true;
    } else if (strip_curly_front(s)) {
      changed = true;
    }
    if (!s.empty() && (kWrap.find(s.back()) != std::string_view::npos ||
                       kTrailing.find(s.back()) != std::string_view::npos)) {
      s.remove_suffix(1);
      changed = true;
    } else if (strip_curly_back(s)) {
      changed = true;
    }
  }
  return std::string(s);
}

std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace playbench::text
