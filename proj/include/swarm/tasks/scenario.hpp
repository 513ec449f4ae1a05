#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace swarm::tasks {

// Parsed scenario document: "[section]" headers followed by "key = values"
// lines, '#' comments. Keys may repeat; each occurrence is one item.
class ScenarioDocument {
 public:
  // Throws ConfigError with the offending line number.
  static ScenarioDocument parse(std::string text);

  const std::string& text() const { return text_; }
  // "fnv1a64:<16 hex digits>" over the exact document text.
  const std::string& digest() const { return digest_; }

  bool has_section(std::string_view section) const;
  bool has(std::string_view section, std::string_view key) const;

  // The following throw ConfigError naming section and key when the entry
  // is missing, repeated, or not of the requested shape.
  std::vector<double> numbers(std::string_view section, std::string_view key) const;
  double number(std::string_view section, std::string_view key) const;
  int integer(std::string_view section, std::string_view key) const;
  std::string word(std::string_view section, std::string_view key) const;
  // Every occurrence of a repeatable key, in document order (may be empty).
  std::vector<std::vector<double>> all_numbers(std::string_view section,
                                               std::string_view key) const;

 private:
  struct Entry {
    std::string key;
    std::vector<std::string> values;
    int line = 0;
  };

  const Entry& single(std::string_view section, std::string_view key) const;
  static std::vector<double> to_numbers(const Entry& entry, std::string_view section);

  std::string text_;
  std::string digest_;
  std::map<std::string, std::vector<Entry>, std::less<>> sections_;
};

// The document shipped in data/default_scenarios.txt, compiled in.
const ScenarioDocument& default_scenarios();

}  // namespace swarm::tasks
