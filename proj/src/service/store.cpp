#include "swarm/service/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>

#include "swarm/error.hpp"

namespace swarm::service {

using harness::TrialRecord;
using nlohmann::json;

bool RecordFilter::matches(const TrialRecord& r) const {
  if (experiment && r.experiment_name != *experiment) return false;
  if (participant && r.participant_id != *participant) return false;
  if (mode && harness::mode_of(r) != *mode) return false;
  return true;
}

RecordStore::RecordStore(std::filesystem::path log_path)
    : path_(std::move(log_path)), items_(std::make_shared<std::vector<StoredRecord>>()) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  {
    std::ifstream in(path_, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    long line_no = 0;
    while (pos < text.size()) {
      const std::size_t end = text.find('\n', pos);
      ++line_no;
      if (end == std::string::npos) break;  // torn final write, never acknowledged
      const std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        StoredRecord item{j.at("id").get<std::uint64_t>(), harness::record_from_json(j.at("record"))};
        next_id_ = std::max(next_id_, item.id + 1);
        append_locked(std::move(item));
      } catch (const std::exception& e) {
        throw ConfigError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (pos < text.size()) {
      // Drop the torn tail so the next append starts on a fresh line.
      std::filesystem::resize_file(path_, pos);
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw ConfigError("cannot open " + path_.string() + ": " + std::strerror(errno));
}

RecordStore::~RecordStore() {
  if (fd_ >= 0) ::close(fd_);
}

void RecordStore::append_locked(StoredRecord item) {
  const auto& r = item.record;
  dedup_.emplace(DedupKey{r.participant_id, r.seed, r.experiment_name, r.steps}, item.id);
  if (items_->size() == items_->capacity()) {
    // Grow into a fresh vector; readers keep the old one alive.
    auto grown = std::make_shared<std::vector<StoredRecord>>();
    grown->reserve(std::max<std::size_t>(16, items_->capacity() * 2));
    grown->insert(grown->end(), items_->begin(), items_->end());
    items_ = std::move(grown);
  }
  items_->push_back(std::move(item));
  std::lock_guard lock(publish_mutex_);
  published_ = {items_, items_->size()};
}

StoreResult RecordStore::store(const TrialRecord& record) {
  std::lock_guard lock(write_mutex_);
  const DedupKey key{record.participant_id, record.seed, record.experiment_name, record.steps};
  if (const auto it = dedup_.find(key); it != dedup_.end()) return {it->second, false};

  StoredRecord item{next_id_, record};
  std::string line = json{{"id", item.id}, {"record", harness::to_json(record)}}.dump();
  line += '\n';
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("store: write failed: " + std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) {
    throw std::runtime_error("store: fdatasync failed: " + std::string(std::strerror(errno)));
  }
  ++next_id_;
  append_locked(std::move(item));
  return {next_id_ - 1, true};
}

StoreResult RecordStore::store_json(const json& j) { return store(harness::record_from_json(j)); }

RecordStore::Snapshot RecordStore::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return published_;
}

std::vector<StoredRecord> RecordStore::query(const RecordFilter& filter) const {
  const auto snap = snapshot();
  std::vector<StoredRecord> out;
  for (std::size_t i = 0; i < snap.count; ++i) {
    const auto& item = (*snap.items)[i];
    if (filter.matches(item.record)) out.push_back(item);
  }
  return out;
}

std::vector<TrialRecord> RecordStore::records(const RecordFilter& filter) const {
  std::vector<TrialRecord> out;
  for (auto& item : query(filter)) out.push_back(std::move(item.record));
  return out;
}

std::optional<TrialRecord> RecordStore::find(std::uint64_t id) const {
  const auto snap = snapshot();
  for (std::size_t i = 0; i < snap.count; ++i) {
    if ((*snap.items)[i].id == id) return (*snap.items)[i].record;
  }
  return std::nullopt;
}

std::size_t RecordStore::size() const { return snapshot().count; }

TokenRegistry::TokenRegistry(std::filesystem::path path) : path_(std::move(path)) {
  if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
  std::ifstream in(*path_);
  for (std::string line; std::getline(in, line);) {
    if (well_formed(line)) tokens_.insert(line);
  }
}

bool TokenRegistry::well_formed(std::string_view token) {
  return token.size() == 32 && token.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

std::string TokenRegistry::issue() {
  static constexpr char kHex[] = "0123456789abcdef";
  std::random_device rd;
  std::lock_guard lock(mutex_);
  for (;;) {
    std::string token;
    for (int i = 0; i < 4; ++i) {
      std::uint32_t word = rd();
      for (int k = 0; k < 8; ++k, word >>= 4) token += kHex[word & 0xf];
    }
    if (!tokens_.insert(token).second) continue;
    if (path_) {
      std::ofstream out(*path_, std::ios::app);
      out << token << '\n';
      if (!out) throw std::runtime_error("tokens: cannot write " + path_->string());
    }
    return token;
  }
}

bool TokenRegistry::known(const std::string& token) const {
  std::lock_guard lock(mutex_);
  return tokens_.count(token) > 0;
}

std::string export_json(const std::vector<TrialRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(harness::to_json(r));
  return out.dump();
}

std::vector<TrialRecord> import_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("json: ") + e.what());
  }
  if (!j.is_array()) throw ConfigError("json: expected an array of records");
  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      out.push_back(harness::record_from_json(j[i]));
    } catch (const ConfigError& e) {
      throw ConfigError("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace swarm::service
