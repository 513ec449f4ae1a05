#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarm/harness/record.hpp"

namespace swarm::harness {

enum class GroupKey { kExperiment, kMode, kNumRobots, kAgent, kParticipant };
GroupKey group_key_from_string(std::string_view name);  // "experiment", "mode", ...
std::string_view to_string(GroupKey key);

struct Summary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct GroupStats {
  std::string group;
  int count = 0;      // all trials in the group
  int completed = 0;
  std::optional<Summary> duration;  // over completed trials; empty when none completed
  double completion_rate = 0.0;
};

// Linear interpolation between closest ranks: index p * (n - 1).
double quantile(std::span<const double> sorted, double p);
Summary summarize(std::vector<double> values);  // values must be nonempty

// Rows in order of first appearance. Throws ConfigError on no records.
std::vector<GroupStats> aggregate_stats(std::span<const TrialRecord> records, GroupKey key);

std::string stats_csv(const std::vector<GroupStats>& rows);
std::string stats_table(const std::vector<GroupStats>& rows);
nlohmann::json stats_json(const std::vector<GroupStats>& rows);

}  // namespace swarm::harness
