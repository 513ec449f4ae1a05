#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace swarm::harness {

struct TrialRecord {
  std::string experiment_name;
  std::string participant_id;
  double duration = 0.0;  // s, steps * dt
  int num_robots = 0;
  std::string mode_detail;  // "n=100;max_steps=18000;ellipse_k=2[;failure=...]"
  std::string agent;
  std::uint64_t seed = 0;
  bool completed = false;
  long steps = 0;
  std::string scenario_digest;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// First item of mode_detail, e.g. "n=100".
std::string mode_of(const TrialRecord& record);

nlohmann::json to_json(const TrialRecord& record);
// Throws ConfigError naming the offending field.
TrialRecord record_from_json(const nlohmann::json& j);

// Field names used by both the JSON form and error messages.
inline constexpr std::string_view kRecordFields[] = {
    "experiment_name", "participant_id", "duration", "num_robots", "mode_detail",
    "agent",           "seed",           "completed", "steps",     "scenario_digest"};

inline constexpr std::string_view kCsvHeader =
    "experiment,participant,duration,num_robots,mode,agent,seed,completed,steps,scenario_digest";

// One CSV line (no trailing newline). Fields are quoted when needed.
std::string to_csv_row(const TrialRecord& record);
std::string to_csv(const std::vector<TrialRecord>& records);
// Parses the output of to_csv; throws ConfigError on malformed input.
std::vector<TrialRecord> records_from_csv(std::string_view text);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace swarm::harness
