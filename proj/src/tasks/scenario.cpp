#include "swarm/tasks/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "swarm/error.hpp"
#include "swarm/rng.hpp"

namespace swarm::tasks {

namespace detail {
extern const char* const kDefaultScenarioText;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

}  // namespace

ScenarioDocument ScenarioDocument::parse(std::string text) {
  ScenarioDocument doc;
  std::string section;  // entries before the first header land in ""
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("scenario line " + std::to_string(line_no) + ": bad section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("scenario line " + std::to_string(line_no) + ": expected key = value");
    }
    Entry entry;
    entry.key = std::string(trim(line.substr(0, eq)));
    entry.line = line_no;
    if (entry.key.empty()) {
      throw ConfigError("scenario line " + std::to_string(line_no) + ": empty key");
    }
    std::istringstream values{std::string(line.substr(eq + 1))};
    for (std::string v; values >> v;) entry.values.push_back(v);
    if (entry.values.empty()) {
      throw ConfigError("scenario line " + std::to_string(line_no) + ": no value for " + entry.key);
    }
    doc.sections_[section].push_back(std::move(entry));
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  doc.digest_ = buf;
  doc.text_ = std::move(text);
  return doc;
}

bool ScenarioDocument::has_section(std::string_view section) const {
  return sections_.find(section) != sections_.end();
}

bool ScenarioDocument::has(std::string_view section, std::string_view key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return false;
  for (const Entry& e : it->second) {
    if (e.key == key) return true;
  }
  return false;
}

const ScenarioDocument::Entry& ScenarioDocument::single(std::string_view section,
                                                        std::string_view key) const {
  const auto it = sections_.find(section);
  const Entry* found = nullptr;
  if (it != sections_.end()) {
    for (const Entry& e : it->second) {
      if (e.key != key) continue;
      if (found) {
        throw ConfigError("scenario " + where(section, key) + " repeated on line " +
                          std::to_string(e.line));
      }
      found = &e;
    }
  }
  if (!found) throw ConfigError("scenario " + where(section, key) + " missing");
  return *found;
}

std::vector<double> ScenarioDocument::to_numbers(const Entry& entry, std::string_view section) {
  std::vector<double> out;
  out.reserve(entry.values.size());
  for (const std::string& v : entry.values) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
      throw ConfigError("scenario " + where(section, entry.key) + " line " +
                        std::to_string(entry.line) + ": not a number: " + v);
    }
    out.push_back(x);
  }
  return out;
}

std::vector<double> ScenarioDocument::numbers(std::string_view section,
                                              std::string_view key) const {
  return to_numbers(single(section, key), section);
}

double ScenarioDocument::number(std::string_view section, std::string_view key) const {
  const auto v = numbers(section, key);
  if (v.size() != 1) throw ConfigError("scenario " + where(section, key) + " expects one number");
  return v[0];
}

int ScenarioDocument::integer(std::string_view section, std::string_view key) const {
  const double v = number(section, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError("scenario " + where(section, key) + " expects an integer");
  }
  return static_cast<int>(v);
}

std::string ScenarioDocument::word(std::string_view section, std::string_view key) const {
  const Entry& e = single(section, key);
  if (e.values.size() != 1) throw ConfigError("scenario " + where(section, key) + " expects one word");
  return e.values[0];
}

std::vector<std::vector<double>> ScenarioDocument::all_numbers(std::string_view section,
                                                               std::string_view key) const {
  std::vector<std::vector<double>> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const Entry& e : it->second) {
    if (e.key == key) out.push_back(to_numbers(e, section));
  }
  return out;
}

const ScenarioDocument& default_scenarios() {
  static const ScenarioDocument doc = ScenarioDocument::parse(detail::kDefaultScenarioText);
  return doc;
}

}  // namespace swarm::tasks
