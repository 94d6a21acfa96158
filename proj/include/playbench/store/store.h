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

// Append-only session and trace store.
//
// Layout under the root directory:
//   sessions/<game>/<YYYY-MM-DD>.log   one SessionRecord per line
//   traces/<game>/<YYYY-MM-DD>.log     one trace record per line
// The date is the UTC day of the session's created_at. Every append is
// flushed with fsync before it returns. Existing bytes are never rewritten;
// a correction is a new line with a higher revision for the same session.

#ifndef PLAYBENCH_STORE_STORE_H_
#define PLAYBENCH_STORE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "playbench/game/types.h"
#include "playbench/retro/retro.h"
#include "playbench/store/serialize.h"

namespace playbench::store {

inline constexpr int kSchemaVersion = 1;

enum class Completeness { kCompleteWithFeedback, kIncomplete };
std::string_view CompletenessName(Completeness c);
Completeness ParseCompleteness(std::string_view name);

// Complete when the session ended with an outcome.
Completeness CompletenessOf(const game::Session& session);

class StoreError : public std::runtime_error {
 public:
  enum class Kind { kDuplicate, kNotFound, kSchema, kIo };
  StoreError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SessionRecord {
  int schema_version = kSchemaVersion;
  game::Session session;
  std::optional<std::string> subset_tag;
  // Extra spellings accepted as the secret when scoring recall.
  std::vector<std::string> aliases;
  Completeness completeness = Completeness::kIncomplete;
  // 0 for the original record, n for the n-th correction.
  int revision = 0;

  static SessionRecord For(game::Session session,
                           std::optional<std::string> subset_tag = {},
                           std::vector<std::string> aliases = {});
  // Throws StoreError(kSchema).
  void Validate() const;
  bool operator==(const SessionRecord&) const = default;
};

Json RecordToJson(const SessionRecord& record);
SessionRecord RecordFromJson(const Json& j);

struct CorpusFilter {
  std::optional<game::GameKind> game;
  std::optional<std::string> model;
  std::optional<std::string> prompt;
  std::optional<std::string> subset_tag;
  std::optional<Completeness> completeness;
  // created_at in [from_ms, to_ms)
  std::optional<std::int64_t> from_ms;
  std::optional<std::int64_t> to_ms;

  bool Matches(const SessionRecord& record) const;
};

// Fraction of complete records; nullopt for an empty corpus.
std::optional<double> UsefulDataRate(const std::vector<SessionRecord>& records);

class SessionStore {
 public:
  // Creates the directory when missing.
  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Returns the session id. Throws StoreError: kSchema for an invalid
  // record, kDuplicate when the id is already stored, kIo on write failure.
  std::string Append(SessionRecord record);
  // Stores a new revision of an existing session. Throws kNotFound.
  int AppendCorrection(SessionRecord record);

  // Latest revision of every matching session, ordered by
  // (created_at, session_id).
  std::vector<SessionRecord> Load(const CorpusFilter& filter = {}) const;
  // Every revision of one session, oldest first.
  std::vector<SessionRecord> History(const std::string& session_id) const;
  std::optional<SessionRecord> Get(const std::string& session_id) const;
  bool Contains(const std::string& session_id) const;

  // Traces are keyed by session; a later append replaces an earlier one.
  void AppendTrace(const retro::RetroTrace& trace);
  std::vector<retro::RetroTrace> LoadTraces(
      std::optional<game::GameKind> game = {}) const;
  std::optional<retro::RetroTrace> GetTrace(const std::string& session_id) const;

  // Every log file under the root, sorted, relative paths.
  std::vector<std::filesystem::path> Files() const;
  // SHA-256 over relative paths and file contents.
  std::string Digest() const;

 private:
  std::vector<SessionRecord> ReadAll() const;
  std::vector<Json> ReadLines(const std::filesystem::path& dir) const;
  void AppendLine(const std::filesystem::path& file, const std::string& line);
  std::int64_t CreatedAtOf(const std::string& session_id) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::map<std::string, int> revisions_;  // session id -> latest revision
  std::map<std::string, std::pair<game::GameKind, std::int64_t>> placement_;
};

// {"schema_version", "sessions": [record...], "traces": [trace...]}
Json ExportBundle(const SessionStore& store, const CorpusFilter& filter = {});

struct ImportStats {
  int sessions = 0;
  int traces = 0;
  int skipped_identical = 0;
};

// Records already present with identical content are skipped; a different
// record under an existing id throws StoreError(kDuplicate). A bundle with
// an unknown schema version throws kSchema.
ImportStats ImportBundle(SessionStore& store, const Json& bundle);

}  // namespace playbench::store

#endif  // PLAYBENCH_STORE_STORE_H_
