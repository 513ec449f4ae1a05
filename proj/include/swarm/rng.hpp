#pragma once

#include <cstdint>
#include <string_view>

namespace swarm {

// Counter-based, splittable generator. Output i of a stream is a pure
// function of (key, i), so streams can be split by name and replayed without
// depending on std:: distribution implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);

  // Independent child stream. Splitting does not advance this stream.
  CounterRng split(std::string_view name) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double next_unit();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  CounterRng(std::uint64_t key, std::uint64_t counter)
      : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace swarm
