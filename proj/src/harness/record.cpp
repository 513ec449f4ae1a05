#include "swarm/harness/record.hpp"

#include <charconv>
#include <cmath>

#include "swarm/error.hpp"

namespace swarm::harness {

namespace {

using nlohmann::json;

const json& field(const json& j, std::string_view name) {
  const auto it = j.find(std::string(name));
  if (it == j.end()) throw ConfigError("missing field " + std::string(name));
  return *it;
}

std::string string_field(const json& j, std::string_view name, bool allow_empty = false) {
  const json& v = field(j, name);
  if (!v.is_string()) throw ConfigError("field " + std::string(name) + " must be a string");
  std::string s = v.get<std::string>();
  if (!allow_empty && s.empty()) throw ConfigError("field " + std::string(name) + " must not be empty");
  return s;
}

std::int64_t integer_field(const json& j, std::string_view name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) throw ConfigError("field " + std::string(name) + " must be an integer");
  return v.get<std::int64_t>();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view name) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("csv column " + std::string(name) + ": bad number " + std::string(s));
  }
  return v;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"' && !cell_started) {
      quoted = true;
      cell_started = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      cell_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(cell));
      rows.push_back(std::move(row));
      row.clear();
      cell.clear();
      cell_started = false;
    } else {
      cell += c;
      cell_started = true;
    }
  }
  if (quoted) throw ConfigError("csv: unterminated quoted field");
  if (cell_started || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string mode_of(const TrialRecord& record) {
  return record.mode_detail.substr(0, record.mode_detail.find(';'));
}

json to_json(const TrialRecord& r) {
  json j = json::object();
  j["experiment_name"] = r.experiment_name;
  j["participant_id"] = r.participant_id;
  j["duration"] = r.duration;
  j["num_robots"] = r.num_robots;
  j["mode_detail"] = r.mode_detail;
  j["agent"] = r.agent;
  j["seed"] = r.seed;
  j["completed"] = r.completed;
  j["steps"] = r.steps;
  j["scenario_digest"] = r.scenario_digest;
  return j;
}

TrialRecord record_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("record must be a JSON object");
  TrialRecord r;
  r.experiment_name = string_field(j, "experiment_name");
  r.participant_id = string_field(j, "participant_id");
  const json& d = field(j, "duration");
  if (!d.is_number() || !std::isfinite(d.get<double>()) || d.get<double>() < 0.0) {
    throw ConfigError("field duration must be a non-negative number");
  }
  r.duration = d.get<double>();
  const auto n = integer_field(j, "num_robots");
  if (n < 0 || n > 1000000) throw ConfigError("field num_robots must be non-negative");
  r.num_robots = static_cast<int>(n);
  r.mode_detail = string_field(j, "mode_detail");
  r.agent = string_field(j, "agent", true);
  const json& seed = field(j, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw ConfigError("field seed must be a non-negative integer");
  }
  r.seed = seed.get<std::uint64_t>();
  const json& c = field(j, "completed");
  if (!c.is_boolean()) throw ConfigError("field completed must be a boolean");
  r.completed = c.get<bool>();
  const auto steps = integer_field(j, "steps");
  if (steps < 0) throw ConfigError("field steps must be non-negative");
  r.steps = static_cast<long>(steps);
  r.scenario_digest = string_field(j, "scenario_digest");
  return r;
}

std::string to_csv_row(const TrialRecord& r) {
  std::string out;
  out += csv_escape(r.experiment_name) + ',';
  out += csv_escape(r.participant_id) + ',';
  out += format_double(r.duration) + ',';
  out += std::to_string(r.num_robots) + ',';
  out += csv_escape(r.mode_detail) + ',';
  out += csv_escape(r.agent) + ',';
  out += std::to_string(r.seed) + ',';
  out += r.completed ? "true," : "false,";
  out += std::to_string(r.steps) + ',';
  out += csv_escape(r.scenario_digest);
  return out;
}

std::string to_csv(const std::vector<TrialRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += to_csv_row(r);
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> records_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ConfigError("csv: missing header");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kCsvHeader) throw ConfigError("csv: unexpected header");
  std::vector<TrialRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != 10) throw ConfigError("csv row " + std::to_string(i) + ": expected 10 columns");
    TrialRecord r;
    r.experiment_name = c[0];
    r.participant_id = c[1];
    r.duration = parse_number<double>(c[2], "duration");
    r.num_robots = parse_number<int>(c[3], "num_robots");
    r.mode_detail = c[4];
    r.agent = c[5];
    r.seed = parse_number<std::uint64_t>(c[6], "seed");
    if (c[7] != "true" && c[7] != "false") throw ConfigError("csv column completed: expected true/false");
    r.completed = c[7] == "true";
    r.steps = parse_number<long>(c[8], "steps");
    r.scenario_digest = c[9];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace swarm::harness
