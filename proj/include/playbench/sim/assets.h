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

// Data files behind the simulated players: the Akinator object ontology,
// the Taboo lexicon and the Bluffing statement bank.

#ifndef PLAYBENCH_SIM_ASSETS_H_
#define PLAYBENCH_SIM_ASSETS_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "playbench/gateway/gateway.h"
#include "playbench/metrics/metrics.h"

namespace playbench::sim {

class AssetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read at all.
class AssetIoError : public AssetError {
 public:
  using AssetError::AssetError;
};

// Throws AssetIoError when the file cannot be read.
std::string ReadTextFile(const std::string& path);

struct Attribute {
  std::string id;
  std::string question;
};

struct OntologyObject {
  std::string name;
  std::map<std::string, bool> attributes;
};

class Ontology {
 public:
  // Throws AssetError unless every object defines every attribute.
  static Ontology FromJsonText(const std::string& text);
  static Ontology FromFile(const std::string& path);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<OntologyObject>& objects() const { return objects_; }

  // Lookup by NormalizedEquals, so "an Electric Guitar" finds the object.
  const OntologyObject* FindObject(std::string_view name) const;
  // Attribute whose question matches `question` ignoring case and spacing.
  const Attribute* FindQuestion(std::string_view question) const;

  // Yes/no label of `item` for `question`; nullopt when either is unknown.
  std::optional<bool> Classify(std::string_view question,
                               std::string_view item) const;
  metrics::Classifier AsClassifier() const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<OntologyObject> objects_;
};

struct LexiconEntry {
  std::string word;
  std::vector<std::string> keywords;
  std::vector<std::string> clues;
};

class TabooLexicon {
 public:
  // Throws AssetError when a clue contains its own word or exceeds
  // `char_limit` code points.
  static TabooLexicon FromJsonText(const std::string& text,
                                   std::size_t char_limit = 140);
  static TabooLexicon FromFile(const std::string& path,
                               std::size_t char_limit = 140);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const LexiconEntry* Find(std::string_view word) const;
  std::vector<std::string> Words() const;

 private:
  std::vector<LexiconEntry> entries_;
};

struct BluffingStatement {
  std::string statement;
  std::vector<std::string> details;
};

struct BluffingBank {
  std::vector<BluffingStatement> statements;
  std::vector<std::string> hedges;
  std::vector<std::string> hedge_cues;
  std::vector<std::string> questions;

  static BluffingBank FromJsonText(const std::string& text);
  static BluffingBank FromFile(const std::string& path);

  // Number of hedge cues found in `answer`.
  int HedgeCount(std::string_view answer) const;
};

struct SimAssets {
  Ontology ontology;
  TabooLexicon lexicon;
  BluffingBank bluffing;

  // Reads ontology.json, taboo_lexicon.json and bluffing.json from `dir`.
  static SimAssets LoadDirectory(const std::string& dir);
};

// <dir>/<game>/*.txt as prompts with ids "<game>/<stem>", sorted by id.
std::vector<gateway::PromptRef> LoadPrompts(const std::string& dir);

// One word per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> LoadWordList(const std::string& path);

}  // namespace playbench::sim

#endif  // PLAYBENCH_SIM_ASSETS_H_
