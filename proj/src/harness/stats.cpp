#include "swarm/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "swarm/error.hpp"

namespace swarm::harness {

GroupKey group_key_from_string(std::string_view name) {
  if (name == "experiment") return GroupKey::kExperiment;
  if (name == "mode") return GroupKey::kMode;
  if (name == "num_robots") return GroupKey::kNumRobots;
  if (name == "agent") return GroupKey::kAgent;
  if (name == "participant") return GroupKey::kParticipant;
  throw ConfigError("unknown group key '" + std::string(name) +
                    "' (experiment, mode, num_robots, agent, participant)");
}

std::string_view to_string(GroupKey key) {
  switch (key) {
    case GroupKey::kExperiment: return "experiment";
    case GroupKey::kMode: return "mode";
    case GroupKey::kNumRobots: return "num_robots";
    case GroupKey::kAgent: return "agent";
    case GroupKey::kParticipant: return "participant";
  }
  return "?";
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty set");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Summary summarize(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return {values.front(), quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75),
          values.back()};
}

namespace {

std::string group_of(const TrialRecord& r, GroupKey key) {
  switch (key) {
    case GroupKey::kExperiment: return r.experiment_name;
    case GroupKey::kMode: return r.experiment_name + "/" + mode_of(r);
    case GroupKey::kNumRobots: return std::to_string(r.num_robots);
    case GroupKey::kAgent: return r.agent;
    case GroupKey::kParticipant: return r.participant_id;
  }
  return {};
}

}  // namespace

std::vector<GroupStats> aggregate_stats(std::span<const TrialRecord> records, GroupKey key) {
  if (records.empty()) throw ConfigError("no records to aggregate");
  std::vector<GroupStats> rows;
  std::vector<std::vector<double>> durations;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    const std::string g = group_of(r, key);
    auto [it, fresh] = index.emplace(g, rows.size());
    if (fresh) {
      GroupStats row;
      row.group = g;
      rows.push_back(std::move(row));
      durations.emplace_back();
    }
    auto& row = rows[it->second];
    ++row.count;
    if (r.completed) {
      ++row.completed;
      durations[it->second].push_back(r.duration);
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].completion_rate = static_cast<double>(rows[i].completed) / rows[i].count;
    if (!durations[i].empty()) rows[i].duration = summarize(std::move(durations[i]));
  }
  return rows;
}

std::string stats_csv(const std::vector<GroupStats>& rows) {
  std::string out = "group,count,completed,min,q1,median,q3,max,completion_rate\n";
  for (const auto& r : rows) {
    std::string g = r.group;
    if (g.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : g) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      g = q + "\"";
    }
    out += g + "," + std::to_string(r.count) + "," + std::to_string(r.completed) + ",";
    if (r.duration) {
      const auto& d = *r.duration;
      out += format_double(d.min) + "," + format_double(d.q1) + "," + format_double(d.median) + "," +
             format_double(d.q3) + "," + format_double(d.max) + ",";
    } else {
      out += ",,,,,";
    }
    out += format_double(r.completion_rate) + "\n";
  }
  return out;
}

std::string stats_table(const std::vector<GroupStats>& rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.group.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %6s %6s %9s %9s %9s %9s %9s %7s\n", static_cast<int>(width),
                "group", "n", "done", "min", "q1", "median", "q3", "max", "rate");
  out += buf;
  for (const auto& r : rows) {
    if (r.duration) {
      const auto& d = *r.duration;
      std::snprintf(buf, sizeof buf, "%-*s %6d %6d %9.3f %9.3f %9.3f %9.3f %9.3f %7.3f\n",
                    static_cast<int>(width), r.group.c_str(), r.count, r.completed, d.min, d.q1,
                    d.median, d.q3, d.max, r.completion_rate);
    } else {
      std::snprintf(buf, sizeof buf, "%-*s %6d %6d %9s %9s %9s %9s %9s %7.3f\n",
                    static_cast<int>(width), r.group.c_str(), r.count, r.completed, "-", "-", "-",
                    "-", "-", r.completion_rate);
    }
    out += buf;
  }
  return out;
}

nlohmann::json stats_json(const std::vector<GroupStats>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"group", r.group},
                        {"count", r.count},
                        {"completed", r.completed},
                        {"completion_rate", r.completion_rate}};
    if (r.duration) {
      j["min"] = r.duration->min;
      j["q1"] = r.duration->q1;
      j["median"] = r.duration->median;
      j["q3"] = r.duration->q3;
      j["max"] = r.duration->max;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace swarm::harness
