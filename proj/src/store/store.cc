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

#include "playbench/store/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "playbench/gateway/mock.h"

namespace playbench::store {
namespace {

namespace fs = std::filesystem;
using game::GameKind;

constexpr char kSessionsDir[] = "sessions";
constexpr char kTracesDir[] = "traces";

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StoreError(StoreError::Kind::kIo, "cannot read " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<fs::path> LogFiles(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return files;
  for (const auto& entry : fs::recursive_directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".log") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

fs::path LogPath(const fs::path& root, const char* kind, GameKind game,
                 std::int64_t created_at_ms) {
  return root / kind / std::string(game::GameName(game)) /
         (UtcDate(created_at_ms) + ".log");
}

bool Before(const SessionRecord& a, const SessionRecord& b) {
  return std::tie(a.session.created_at_ms, a.session.session_id) <
         std::tie(b.session.created_at_ms, b.session.session_id);
}

}  // namespace

std::string_view CompletenessName(Completeness c) {
  return c == Completeness::kCompleteWithFeedback ? "complete_with_feedback"
                                                  : "incomplete";
}

Completeness ParseCompleteness(std::string_view name) {
  if (name == "complete_with_feedback") return Completeness::kCompleteWithFeedback;
  if (name == "incomplete") return Completeness::kIncomplete;
  throw SchemaError("unknown completeness: " + std::string(name));
}

Completeness CompletenessOf(const game::Session& session) {
  return session.outcome.has_value() ? Completeness::kCompleteWithFeedback
                                     : Completeness::kIncomplete;
}

SessionRecord SessionRecord::For(game::Session session,
                                 std::optional<std::string> subset_tag,
                                 std::vector<std::string> aliases) {
  SessionRecord r;
  r.completeness = CompletenessOf(session);
  r.session = std::move(session);
  r.subset_tag = std::move(subset_tag);
  r.aliases = std::move(aliases);
  return r;
}

void SessionRecord::Validate() const {
  auto fail = [&](const std::string& why) {
    throw StoreError(StoreError::Kind::kSchema,
                     "record " + session.session_id + ": " + why);
  };
  if (schema_version != kSchemaVersion) {
    fail("unsupported schema_version " + std::to_string(schema_version));
  }
  const std::string& id = session.session_id;
  if (id.empty() || id.find_first_of("/\\\n") != std::string::npos) {
    fail("session_id must be non-empty without path separators");
  }
  if (session.model_ref.empty()) fail("model_ref is empty");
  if (revision < 0) fail("negative revision");
  try {
    session.config.Validate();
    session.inference_params.Validate();
  } catch (const game::GameError& e) {
    fail(e.what());
  }
  const bool won = session.status == game::SessionStatus::kModelWon ||
                   session.status == game::SessionStatus::kUserWon;
  if (won != session.outcome.has_value()) {
    fail("outcome must be present exactly when the session was won");
  }
  if (completeness != CompletenessOf(session)) {
    fail("completeness flag disagrees with the outcome");
  }
}

Json RecordToJson(const SessionRecord& r) {
  Json j = {{"schema_version", r.schema_version},
            {"session", ToJson(r.session)},
            {"aliases", r.aliases},
            {"completeness", CompletenessName(r.completeness)},
            {"revision", r.revision}};
  if (r.subset_tag) j["subset_tag"] = *r.subset_tag;
  return j;
}

SessionRecord RecordFromJson(const Json& j) {
  try {
    SessionRecord r;
    r.schema_version = j.at("schema_version");
    r.session = SessionFromJson(j.at("session"));
    if (j.contains("subset_tag") && !j["subset_tag"].is_null()) {
      r.subset_tag = j["subset_tag"].get<std::string>();
    }
    r.aliases = j.value("aliases", std::vector<std::string>{});
    r.completeness =
        ParseCompleteness(j.at("completeness").get<std::string>());
    r.revision = j.value("revision", 0);
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed record: ") + e.what());
  }
}

bool CorpusFilter::Matches(const SessionRecord& r) const {
  const game::Session& s = r.session;
  if (game && s.game() != *game) return false;
  if (model && s.model_ref != *model) return false;
  if (prompt && s.prompt_ref != *prompt) return false;
  if (subset_tag && r.subset_tag != subset_tag) return false;
  if (completeness && r.completeness != *completeness) return false;
  if (from_ms && s.created_at_ms < *from_ms) return false;
  if (to_ms && s.created_at_ms >= *to_ms) return false;
  return true;
}

std::optional<double> UsefulDataRate(const std::vector<SessionRecord>& records) {
  if (records.empty()) return std::nullopt;
  long complete = 0;
  for (const SessionRecord& r : records) {
    if (r.completeness == Completeness::kCompleteWithFeedback) ++complete;
  }
  return static_cast<double>(complete) / static_cast<double>(records.size());
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) {
    throw StoreError(StoreError::Kind::kIo,
                     "cannot create " + root_.string() + ": " + ec.message());
  }
  for (const SessionRecord& r : ReadAll()) {
    int& rev = revisions_[r.session.session_id];
    rev = std::max(rev, r.revision);
    placement_[r.session.session_id] = {r.session.game(),
                                        r.session.created_at_ms};
  }
}

std::vector<Json> SessionStore::ReadLines(const fs::path& dir) const {
  std::vector<Json> out;
  for (const fs::path& file : LogFiles(dir)) {
    std::istringstream lines(ReadFile(file));
    int number = 0;
    for (std::string line; std::getline(lines, line);) {
      ++number;
      if (line.empty()) continue;
      try {
        out.push_back(Json::parse(line));
      } catch (const Json::exception& e) {
        throw StoreError(StoreError::Kind::kSchema,
                         file.string() + ":" + std::to_string(number) + ": " +
                             e.what());
      }
    }
  }
  return out;
}

std::vector<SessionRecord> SessionStore::ReadAll() const {
  std::vector<SessionRecord> out;
  for (const Json& j : ReadLines(root_ / kSessionsDir)) {
    try {
      out.push_back(RecordFromJson(j));
    } catch (const SchemaError& e) {
      throw StoreError(StoreError::Kind::kSchema, e.what());
    }
  }
  return out;
}

void SessionStore::AppendLine(const fs::path& file, const std::string& line) {
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  if (ec) {
    throw StoreError(StoreError::Kind::kIo, "cannot create " +
                                                file.parent_path().string());
  }
  int fd = ::open(file.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw StoreError(StoreError::Kind::kIo,
                     "cannot open " + file.string() + ": " + std::strerror(errno));
  }
  std::string data = line + "\n";
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw StoreError(StoreError::Kind::kIo,
                       "write to " + file.string() + ": " + std::strerror(err));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    int err = errno;
    ::close(fd);
    throw StoreError(StoreError::Kind::kIo,
                     "fsync " + file.string() + ": " + std::strerror(err));
  }
  ::close(fd);
}

std::string SessionStore::Append(SessionRecord record) {
  record.Validate();
  std::lock_guard lock(mu_);
  const std::string& id = record.session.session_id;
  if (revisions_.contains(id)) {
    throw StoreError(StoreError::Kind::kDuplicate,
                     "session " + id + " is already stored");
  }
  AppendLine(LogPath(root_, kSessionsDir, record.session.game(),
                     record.session.created_at_ms),
             RecordToJson(record).dump());
  revisions_[id] = record.revision;
  placement_[id] = {record.session.game(), record.session.created_at_ms};
  return id;
}

int SessionStore::AppendCorrection(SessionRecord record) {
  record.Validate();
  std::lock_guard lock(mu_);
  const std::string& id = record.session.session_id;
  auto it = revisions_.find(id);
  if (it == revisions_.end()) {
    throw StoreError(StoreError::Kind::kNotFound,
                     "no session " + id + " to correct");
  }
  auto [game, created] = placement_.at(id);
  if (record.session.game() != game || record.session.created_at_ms != created) {
    throw StoreError(StoreError::Kind::kSchema,
                     "a correction cannot change game or created_at");
  }
  record.revision = it->second + 1;
  AppendLine(LogPath(root_, kSessionsDir, game, created),
             RecordToJson(record).dump());
  it->second = record.revision;
  return record.revision;
}

std::vector<SessionRecord> SessionStore::Load(const CorpusFilter& filter) const {
  std::lock_guard lock(mu_);
  std::map<std::string, SessionRecord> latest;
  for (SessionRecord& r : ReadAll()) {
    auto it = latest.find(r.session.session_id);
    if (it == latest.end()) {
      latest.emplace(r.session.session_id, std::move(r));
    } else if (r.revision > it->second.revision) {
      it->second = std::move(r);
    }
  }
  std::vector<SessionRecord> out;
  for (auto& [id, r] : latest) {
    if (filter.Matches(r)) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), Before);
  return out;
}

std::vector<SessionRecord> SessionStore::History(
    const std::string& session_id) const {
  std::lock_guard lock(mu_);
  std::vector<SessionRecord> out;
  for (SessionRecord& r : ReadAll()) {
    if (r.session.session_id == session_id) out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.revision < b.revision; });
  return out;
}

std::optional<SessionRecord> SessionStore::Get(
    const std::string& session_id) const {
  auto history = History(session_id);
  if (history.empty()) return std::nullopt;
  return history.back();
}

bool SessionStore::Contains(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  return revisions_.contains(session_id);
}

std::int64_t SessionStore::CreatedAtOf(const std::string& session_id) const {
  auto it = placement_.find(session_id);
  if (it == placement_.end()) {
    throw StoreError(StoreError::Kind::kNotFound,
                     "trace for unknown session " + session_id);
  }
  return it->second.second;
}

void SessionStore::AppendTrace(const retro::RetroTrace& trace) {
  std::lock_guard lock(mu_);
  std::int64_t created = CreatedAtOf(trace.session_id);
  Json j = {{"schema_version", kSchemaVersion}, {"trace", ToJson(trace)}};
  AppendLine(LogPath(root_, kTracesDir, trace.game, created), j.dump());
}

std::vector<retro::RetroTrace> SessionStore::LoadTraces(
    std::optional<GameKind> game) const {
  std::lock_guard lock(mu_);
  std::map<std::string, retro::RetroTrace> latest;
  for (const Json& j : ReadLines(root_ / kTracesDir)) {
    retro::RetroTrace t;
    try {
      if (j.at("schema_version").get<int>() != kSchemaVersion) {
        throw StoreError(StoreError::Kind::kSchema,
                         "unsupported trace schema_version");
      }
      t = TraceFromJson(j.at("trace"));
    } catch (const Json::exception& e) {
      throw StoreError(StoreError::Kind::kSchema, e.what());
    } catch (const SchemaError& e) {
      throw StoreError(StoreError::Kind::kSchema, e.what());
    }
    if (game && t.game != *game) continue;
    latest[t.session_id] = std::move(t);
  }
  std::vector<retro::RetroTrace> out;
  for (auto& [id, t] : latest) out.push_back(std::move(t));
  return out;
}

std::optional<retro::RetroTrace> SessionStore::GetTrace(
    const std::string& session_id) const {
  for (retro::RetroTrace& t : LoadTraces()) {
    if (t.session_id == session_id) return std::move(t);
  }
  return std::nullopt;
}

std::vector<fs::path> SessionStore::Files() const {
  std::vector<fs::path> out;
  for (const char* dir : {kSessionsDir, kTracesDir}) {
    for (const fs::path& f : LogFiles(root_ / dir)) {
      out.push_back(fs::relative(f, root_));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SessionStore::Digest() const {
  std::string data;
  for (const fs::path& f : Files()) {
    data += f.generic_string();
    data.push_back('\0');
    data += ReadFile(root_ / f);
    data.push_back('\0');
  }
  return gateway::Sha256Hex(data);
}

Json ExportBundle(const SessionStore& store, const CorpusFilter& filter) {
  Json sessions = Json::array();
  std::set<std::string> ids;
  for (const SessionRecord& latest : store.Load(filter)) {
    ids.insert(latest.session.session_id);
    for (const SessionRecord& r : store.History(latest.session.session_id)) {
      sessions.push_back(RecordToJson(r));
    }
  }
  Json traces = Json::array();
  for (const retro::RetroTrace& t : store.LoadTraces()) {
    if (ids.contains(t.session_id)) traces.push_back(ToJson(t));
  }
  return {{"schema_version", kSchemaVersion},
          {"sessions", sessions},
          {"traces", traces}};
}

ImportStats ImportBundle(SessionStore& store, const Json& bundle) {
  ImportStats stats;
  int version = 0;
  try {
    version = bundle.at("schema_version").get<int>();
  } catch (const Json::exception& e) {
    throw StoreError(StoreError::Kind::kSchema,
                     std::string("bundle without schema_version: ") + e.what());
  }
  if (version != kSchemaVersion) {
    throw StoreError(StoreError::Kind::kSchema,
                     "unsupported bundle schema_version " +
                         std::to_string(version));
  }
  try {
    for (const Json& j : bundle.at("sessions")) {
      SessionRecord r = RecordFromJson(j);
      const std::string id = r.session.session_id;
      std::vector<SessionRecord> history = store.History(id);
      if (history.empty()) {
        store.Append(std::move(r));
        ++stats.sessions;
        continue;
      }
      auto same = std::find(history.begin(), history.end(), r);
      if (same != history.end()) {
        ++stats.skipped_identical;
      } else if (r.revision > history.back().revision) {
        store.AppendCorrection(std::move(r));
        ++stats.sessions;
      } else {
        throw StoreError(StoreError::Kind::kDuplicate,
                         "session " + id + " differs from the stored record");
      }
    }
    for (const Json& j : bundle.at("traces")) {
      retro::RetroTrace t = TraceFromJson(j);
      if (store.GetTrace(t.session_id) == t) {
        ++stats.skipped_identical;
        continue;
      }
      store.AppendTrace(t);
      ++stats.traces;
    }
  } catch (const SchemaError& e) {
    throw StoreError(StoreError::Kind::kSchema, e.what());
  } catch (const Json::exception& e) {
    throw StoreError(StoreError::Kind::kSchema, e.what());
  }
  return stats;
}

}  // namespace playbench::store
