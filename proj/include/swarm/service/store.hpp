#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string_view>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "swarm/harness/record.hpp"

namespace swarm::service {

struct StoredRecord {
  std::uint64_t id = 0;
  harness::TrialRecord record;
};

struct RecordFilter {
  std::optional<std::string> experiment;
  std::optional<std::string> participant;
  std::optional<std::string> mode;  // compared against harness::mode_of

  bool matches(const harness::TrialRecord& r) const;
};

struct StoreResult {
  std::uint64_t id = 0;
  bool inserted = false;  // false: exact duplicate of an earlier record
};

// Append-only record log, one JSON object per line. Opening replays the log
// into the in-memory index. Writers are serialized; readers work on
// snapshots and never wait for the disk.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path log_path);
  ~RecordStore();
  RecordStore(const RecordStore&) = delete;
  RecordStore& operator=(const RecordStore&) = delete;

  StoreResult store(const harness::TrialRecord& record);
  // Validates first; ConfigError names the bad field.
  StoreResult store_json(const nlohmann::json& j);

  std::vector<StoredRecord> query(const RecordFilter& filter = {}) const;
  std::vector<harness::TrialRecord> records(const RecordFilter& filter = {}) const;
  std::optional<harness::TrialRecord> find(std::uint64_t id) const;
  std::size_t size() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  struct Snapshot {
    std::shared_ptr<const std::vector<StoredRecord>> items;
    std::size_t count = 0;
  };
  Snapshot snapshot() const;
  void append_locked(StoredRecord item);

  using DedupKey = std::tuple<std::string, std::uint64_t, std::string, long>;

  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex write_mutex_;
  std::map<DedupKey, std::uint64_t> dedup_;
  std::uint64_t next_id_ = 1;

  // Elements below count are immutable once published, so appends into
  // spare capacity do not disturb readers of an older snapshot.
  std::shared_ptr<std::vector<StoredRecord>> items_;
  mutable std::mutex publish_mutex_;
  Snapshot published_;
};

// Issues opaque 128-bit participant tokens (32 hex digits). With a path,
// issued tokens are appended there and reloaded on restart.
class TokenRegistry {
 public:
  TokenRegistry() = default;
  explicit TokenRegistry(std::filesystem::path path);

  std::string issue();
  bool known(const std::string& token) const;
  static bool well_formed(std::string_view token);

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mutex_;
  std::set<std::string> tokens_;
};

// Export forms used by the HTTP endpoints.
std::string export_json(const std::vector<harness::TrialRecord>& records);
std::vector<harness::TrialRecord> import_json(std::string_view text);

}  // namespace swarm::service
