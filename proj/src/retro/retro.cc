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

#include "playbench/retro/retro.h"

#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "playbench/game/text.h"

namespace playbench::retro {
namespace {

using game::GameKind;
using gateway::ChatMessage;

constexpr std::array<std::string_view, 5> kJudgmentPhrases = {
    "True", "Possibly true", "Unknown", "Possibly false", "False"};

std::string_view AnchorLabel(GameKind game) {
  return game == GameKind::kTaboo ? "Word" : "Object";
}

struct Anchor {
  std::string content;
  std::size_t end = 0;  // offset just past the closing marker
};

// Every "** <label>: content **" in document order.
std::vector<Anchor> FindAnchors(std::string_view text, std::string_view label) {
  std::vector<Anchor> anchors;
  std::size_t from = 0;
  while ((from = text.find("**", from)) != std::string_view::npos) {
    std::size_t start = from + 2;
    while (start < text.size() && (text[start] == ' ' || text[start] == '\t')) {
      ++start;
    }
    std::string_view rest = text.substr(start);
    if (text::FindIgnoreCase(rest.substr(0, label.size()), label) != 0) {
      from = start;
      continue;
    }
    std::size_t colon = label.size();
    while (colon < rest.size() && rest[colon] == ' ') ++colon;
    if (colon >= rest.size() || rest[colon] != ':') {
      from = start;
      continue;
    }
    std::size_t body = start + colon + 1;
    std::size_t close = text.find("**", body);
    std::size_t line_end = text.find('\n', body);
    Anchor anchor;
    if (close == std::string_view::npos ||
        (line_end != std::string_view::npos && line_end < close &&
         label != "Additional Information")) {
      std::size_t end = line_end == std::string_view::npos ? text.size()
                                                           : line_end;
      anchor.content = std::string(text::Trim(text.substr(body, end - body)));
      anchor.end = end;
    } else {
      anchor.content =
          std::string(text::Trim(text.substr(body, close - body)));
      anchor.end = close + 2;
    }
    anchors.push_back(std::move(anchor));
    from = anchors.back().end;
  }
  return anchors;
}

std::string CleanItem(std::string_view raw) {
  std::string item = text::CleanPayload(raw);
  return std::string(text::Trim(item));
}

std::optional<std::string> ListLineItem(std::string_view line) {
  line = text::Trim(line);
  if (line.empty()) return std::nullopt;
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
    return CleanItem(line.substr(i + 1));
  }
  if (line.starts_with("- ") || line.starts_with("* ") ||
      line.starts_with("• ")) {
    return CleanItem(line.substr(line.find(' ') + 1));
  }
  return std::nullopt;
}

std::vector<std::string> SplitTopLevel(std::string_view text) {
  std::vector<std::string> pieces;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    if ((c == ',' && depth == 0) || c == '\n') {
      pieces.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  pieces.push_back(current);
  std::vector<std::string> out;
  for (const std::string& p : pieces) {
    std::string item = CleanItem(p);
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

std::vector<std::string> FallbackItems(std::string_view text) {
  std::vector<std::string> items;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    if (auto item = ListLineItem(line); item && !item->empty()) {
      items.push_back(std::move(*item));
    }
  }
  if (!items.empty()) return items;
  // A bare comma or newline separated list of short names.
  std::vector<std::string> pieces = SplitTopLevel(text);
  if (pieces.size() < 2) return {};
  for (const std::string& p : pieces) {
    if (text::Words(p).size() > 8) return {};
  }
  return pieces;
}

}  // namespace

std::vector<ChatMessage> ReplayPoint::Messages() const {
  std::vector<ChatMessage> messages = history_prefix;
  if (!messages.empty() && messages.back().role == game::Role::kUser) {
    messages.back().content += "\n\n" + retro_prompt;
  } else {
    messages.push_back({game::Role::kUser, retro_prompt});
  }
  return messages;
}

std::vector<ChatMessage> SessionMessages(const game::Session& session) {
  std::vector<ChatMessage> messages;
  messages.reserve(session.turns.size());
  for (const game::Turn& turn : session.turns) {
    messages.push_back({turn.role, turn.content});
  }
  return messages;
}

std::vector<ReplayPoint> ReplayPoints(const game::Session& session,
                                      std::string_view retro_prompt) {
  if (!session.finished()) {
    throw game::GameError(game::ErrorCode::kGameNotOver,
                          "retrospective replay needs a finished session");
  }
  std::vector<ChatMessage> messages = SessionMessages(session);
  std::vector<ReplayPoint> points;
  auto add = [&](int round, std::size_t prefix_length) {
    ReplayPoint point;
    point.session_id = session.session_id;
    point.round = round;
    point.history_prefix.assign(messages.begin(),
                                messages.begin() + prefix_length);
    point.retro_prompt = std::string(retro_prompt);
    points.push_back(std::move(point));
  };

  if (session.game() == GameKind::kBluffing) {
    int answered = 0;
    for (std::size_t i = 0; i < messages.size(); ++i) {
      if (messages[i].role == game::Role::kUser) add(answered++, i + 1);
    }
    return points;
  }

  // The final prediction is excluded when it was the correct answer.
  std::size_t last_model = messages.size();
  for (std::size_t i = messages.size(); i-- > 0;) {
    if (messages[i].role == game::Role::kModel) {
      last_model = i;
      break;
    }
  }
  bool drop_last = false;
  if (last_model < messages.size() && session.outcome.has_value() &&
      session.outcome->winner == game::Winner::kModel) {
    drop_last = session.turns[last_model].kind == game::TurnKind::kPrediction;
  }
  int round = 0;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages[i].role != game::Role::kModel) continue;
    ++round;
    if (drop_last && i == last_model) break;
    add(round, i + 1);
  }
  return points;
}

RetroPrompts RetroPrompts::LoadDirectory(const std::string& dir) {
  RetroPrompts prompts;
  for (GameKind g : game::kAllGames) {
    std::filesystem::path path =
        std::filesystem::path(dir) / (std::string(game::GameName(g)) + ".txt");
    std::ifstream in(path);
    if (!in) continue;
    std::stringstream buffer;
    buffer << in.rdbuf();
    prompts.Set(g, buffer.str());
  }
  return prompts;
}

void RetroPrompts::Set(GameKind game, std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) {
    text.pop_back();
  }
  prompts_[game] = std::move(text);
}

const std::string& RetroPrompts::Get(GameKind game) const {
  auto it = prompts_.find(game);
  if (it == prompts_.end()) {
    throw game::GameError(game::ErrorCode::kInvalidConfig,
                          "no retrospective prompt for " +
                              std::string(game::GameName(game)));
  }
  return it->second;
}

RankedList ParseRankedList(std::string_view text, GameKind game) {
  RankedList list;
  std::vector<std::string> raw_items;
  for (Anchor& a : FindAnchors(text, AnchorLabel(game))) {
    std::string item = CleanItem(a.content);
    if (!item.empty()) raw_items.push_back(std::move(item));
  }
  auto info = FindAnchors(text, "Additional Information");
  if (!info.empty()) {
    list.rationale = info.front().content;
    if (list.rationale.empty()) {
      list.rationale = std::string(text::Trim(text.substr(info.front().end)));
    }
  }
  if (raw_items.empty()) {
    std::string_view body = text;
    if (!info.empty()) {
      std::size_t at = text::FindIgnoreCase(text, "** Additional Information");
      if (at != std::string_view::npos) body = text.substr(0, at);
    }
    raw_items = FallbackItems(body);
    list.low_confidence = !raw_items.empty();
  }
  std::set<std::string> seen;
  for (std::string& item : raw_items) {
    if (!seen.insert(text::ToLower(item)).second) continue;
    if (static_cast<int>(list.items.size()) == kMaxListLength) {
      list.truncated = true;
      break;
    }
    list.items.push_back(std::move(item));
  }
  list.unparseable = list.items.empty();
  return list;
}

Judgment ParseJudgment(std::string_view text) {
  constexpr std::string_view kAnchor = "i believe your statement is";
  std::size_t at = text::FindIgnoreCase(text, kAnchor);
  if (at == std::string_view::npos) return {kDefaultJudgment, true};
  std::string_view rest = text.substr(at + kAnchor.size());
  for (std::string_view stop : {std::string_view("**"), std::string_view("\n")}) {
    std::size_t end = rest.find(stop);
    if (end != std::string_view::npos) rest = rest.substr(0, end);
  }
  std::string phrase = text::Join(text::Words(rest), " ");
  for (int level = 2; level <= 4; ++level) {  // multi-word phrases first
    if (phrase.starts_with(text::ToLower(kJudgmentPhrases[level - 1]))) {
      return {level, false};
    }
  }
  if (phrase.starts_with("true")) return {1, false};
  if (phrase.starts_with("false")) return {5, false};
  return {kDefaultJudgment, true};
}

std::string_view JudgmentPhrase(int level) {
  if (level < 1 || level > 5) return kJudgmentPhrases[kDefaultJudgment - 1];
  return kJudgmentPhrases[level - 1];
}

std::string FormatJudgment(int level) {
  return "** I believe your statement is: " + std::string(JudgmentPhrase(level)) +
         " **";
}

std::string FormatRankedList(const std::vector<std::string>& items,
                             GameKind game, std::string_view rationale) {
  std::string out;
  for (const std::string& item : items) {
    out += "** " + std::string(AnchorLabel(game)) + ": " + item + " **\n";
  }
  if (!rationale.empty()) {
    out += "** Additional Information: " + std::string(rationale) + " **\n";
  }
  return out;
}

bool RetroEntry::usable() const {
  if (failed) return false;
  if (list.has_value()) return !list->unparseable;
  if (judgment.has_value()) return !judgment->unparseable;
  return false;
}

bool RetroTrace::complete() const {
  for (const RetroEntry& e : entries) {
    if (e.failed) return false;
  }
  return true;
}

RetroTrace RunRetrospective(const game::Session& session,
                            gateway::ChatClient& client,
                            const gateway::ModelRef& model,
                            const RetroPrompts& prompts,
                            const RetroTrace* resume) {
  const std::string& prompt = prompts.Get(session.game());
  RetroTrace trace;
  trace.session_id = session.session_id;
  trace.game = session.game();
  trace.model_ref = session.model_ref;

  std::map<int, const RetroEntry*> done;
  if (resume != nullptr && resume->session_id == session.session_id) {
    for (const RetroEntry& e : resume->entries) {
      if (!e.failed) done[e.round] = &e;
    }
  }

  for (const ReplayPoint& point : ReplayPoints(session, prompt)) {
    if (auto it = done.find(point.round); it != done.end()) {
      trace.entries.push_back(*it->second);
      continue;
    }
    RetroEntry entry;
    entry.round = point.round;
    try {
      entry.raw = client.Complete(model, session.system_prompt,
                                  point.Messages(), session.inference_params);
    } catch (const gateway::GatewayError& e) {
      entry.failed = true;
      entry.error = std::string(gateway::GatewayErrorKindName(e.kind())) +
                    ": " + e.what();
      trace.entries.push_back(std::move(entry));
      break;
    }
    if (session.game() == GameKind::kBluffing) {
      entry.judgment = ParseJudgment(entry.raw);
    } else {
      entry.list = ParseRankedList(entry.raw, session.game());
    }
    trace.entries.push_back(std::move(entry));
  }
  return trace;
}

}  // namespace playbench::retro
