#pragma once

#include <stdexcept>
#include <string>

namespace swarm {

// Raised for invalid configurations: bad geometry, mismatched input sizes,
// unknown task modes, malformed documents.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace swarm
