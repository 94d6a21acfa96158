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

#include "playbench/sim/assets.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "playbench/game/rules.h"
#include "playbench/game/text.h"

namespace playbench::sim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json ParseJson(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw AssetError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::string Canonical(std::string_view s) {
  return text::Join(text::Words(s), " ");
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AssetIoError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Ontology Ontology::FromJsonText(const std::string& text) {
  json j = ParseJson(text, "ontology");
  Ontology o;
  try {
    for (const json& a : j.at("attributes")) {
      o.attributes_.push_back({a.at("id"), a.at("question")});
    }
    for (const json& obj : j.at("objects")) {
      OntologyObject x;
      x.name = obj.at("name");
      x.attributes = obj.at("attributes").get<std::map<std::string, bool>>();
      o.objects_.push_back(std::move(x));
    }
  } catch (const json::exception& e) {
    throw AssetError(std::string("malformed ontology: ") + e.what());
  }
  for (const OntologyObject& x : o.objects_) {
    for (const Attribute& a : o.attributes_) {
      if (!x.attributes.contains(a.id)) {
        throw AssetError("ontology object " + x.name + " lacks attribute " +
                         a.id);
      }
    }
    if (x.attributes.size() != o.attributes_.size()) {
      throw AssetError("ontology object " + x.name +
                       " has undeclared attributes");
    }
  }
  return o;
}

Ontology Ontology::FromFile(const std::string& path) {
  return FromJsonText(ReadTextFile(path));
}

const OntologyObject* Ontology::FindObject(std::string_view name) const {
  for (const OntologyObject& x : objects_) {
    if (game::NormalizedEquals(x.name, name)) return &x;
  }
  return nullptr;
}

const Attribute* Ontology::FindQuestion(std::string_view question) const {
  const std::string want = Canonical(question);
  for (const Attribute& a : attributes_) {
    if (Canonical(a.question) == want) return &a;
  }
  return nullptr;
}

std::optional<bool> Ontology::Classify(std::string_view question,
                                       std::string_view item) const {
  const Attribute* a = FindQuestion(question);
  const OntologyObject* x = FindObject(item);
  if (a == nullptr || x == nullptr) return std::nullopt;
  return x->attributes.at(a->id);
}

metrics::Classifier Ontology::AsClassifier() const {
  return [this](std::string_view q, std::string_view item) {
    return Classify(q, item);
  };
}

TabooLexicon TabooLexicon::FromJsonText(const std::string& text,
                                        std::size_t char_limit) {
  json j = ParseJson(text, "taboo lexicon");
  TabooLexicon lex;
  try {
    for (const json& e : j.at("entries")) {
      LexiconEntry entry;
      entry.word = e.at("word");
      entry.keywords = e.at("keywords").get<std::vector<std::string>>();
      entry.clues = e.at("clues").get<std::vector<std::string>>();
      lex.entries_.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw AssetError(std::string("malformed taboo lexicon: ") + e.what());
  }
  for (const LexiconEntry& e : lex.entries_) {
    for (const std::string& clue : e.clues) {
      if (game::DetectKeyword(clue, e.word)) {
        throw AssetError("clue for " + e.word + " contains the word: " + clue);
      }
      if (text::Utf8Length(clue) > char_limit) {
        throw AssetError("clue for " + e.word + " is over the limit: " + clue);
      }
    }
  }
  return lex;
}

TabooLexicon TabooLexicon::FromFile(const std::string& path,
                                    std::size_t char_limit) {
  return FromJsonText(ReadTextFile(path), char_limit);
}

const LexiconEntry* TabooLexicon::Find(std::string_view word) const {
  for (const LexiconEntry& e : entries_) {
    if (game::NormalizedEquals(e.word, word)) return &e;
  }
  return nullptr;
}

std::vector<std::string> TabooLexicon::Words() const {
  std::vector<std::string> out;
  for (const LexiconEntry& e : entries_) out.push_back(e.word);
  return out;
}

BluffingBank BluffingBank::FromJsonText(const std::string& text) {
  json j = ParseJson(text, "bluffing bank");
  BluffingBank bank;
  try {
    for (const json& s : j.at("statements")) {
      bank.statements.push_back(
          {s.at("statement"), s.at("details").get<std::vector<std::string>>()});
    }
    bank.hedges = j.at("hedges").get<std::vector<std::string>>();
    bank.hedge_cues = j.at("hedge_cues").get<std::vector<std::string>>();
    bank.questions = j.at("questions").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw AssetError(std::string("malformed bluffing bank: ") + e.what());
  }
  if (bank.statements.empty() || bank.hedges.empty() || bank.questions.empty()) {
    throw AssetError("bluffing bank needs statements, hedges and questions");
  }
  return bank;
}

BluffingBank BluffingBank::FromFile(const std::string& path) {
  return FromJsonText(ReadTextFile(path));
}

int BluffingBank::HedgeCount(std::string_view answer) const {
  const std::string lower = " " + Canonical(answer) + " ";
  int count = 0;
  for (const std::string& cue : hedge_cues) {
    if (lower.find(" " + Canonical(cue) + " ") != std::string::npos) ++count;
  }
  return count;
}

SimAssets SimAssets::LoadDirectory(const std::string& dir) {
  fs::path d(dir);
  return SimAssets{Ontology::FromFile((d / "ontology.json").string()),
                   TabooLexicon::FromFile((d / "taboo_lexicon.json").string()),
                   BluffingBank::FromFile((d / "bluffing.json").string())};
}

std::vector<gateway::PromptRef> LoadPrompts(const std::string& dir) {
  std::vector<gateway::PromptRef> out;
  for (game::GameKind g : game::kAllGames) {
    fs::path sub = fs::path(dir) / std::string(game::GameName(g));
    std::error_code ec;
    if (!fs::is_directory(sub, ec)) continue;
    for (const auto& entry : fs::directory_iterator(sub)) {
      if (entry.path().extension() != ".txt") continue;
      gateway::PromptRef p;
      p.id = std::string(game::GameName(g)) + "/" + entry.path().stem().string();
      p.game = g;
      p.body = std::string(text::Trim(ReadTextFile(entry.path().string())));
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::vector<std::string> LoadWordList(const std::string& path) {
  std::vector<std::string> words;
  std::istringstream lines(ReadTextFile(path));
  for (std::string line; std::getline(lines, line);) {
    std::string_view w = text::Trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.emplace_back(w);
  }
  return words;
}

}  // namespace playbench::sim
