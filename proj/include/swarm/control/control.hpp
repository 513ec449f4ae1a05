#pragma once

#include <span>
#include <vector>

#include "swarm/rng.hpp"
#include "swarm/vec2.hpp"

namespace swarm::control {

enum class ControlScheme { kGlobalForce, kAttractivePoint, kRepulsivePoint };

struct ControlParams {
  double u_max = 25.0;           // N, per-robot force bound
  double ramp_time = 1.0;        // s
  double attract_epsilon = 0.3;  // m, dead zone around the pointer
};

// What a controller or a human asks for on one tick.
struct ControlIntent {
  Vec2 key_direction;  // components in {-1, 0, 1}
  Vec2 pointer;        // world coordinates
  bool pointer_engaged = false;

  friend bool operator==(const ControlIntent&, const ControlIntent&) = default;
};

struct InputState {
  Vec2 key_direction;  // components in {-1, 0, 1}
  Vec2 pointer;
  bool pointer_engaged = false;
  double held_duration = 0.0;  // s
};

struct NoiseConfig {
  double max_fraction = 0.0;  // M, in [0, 2]
};

double ramp_magnitude(double held_duration, const ControlParams& params);

// Per-robot control force. Throws ConfigError on an empty swarm.
std::vector<Vec2> control_forces(ControlScheme scheme, const InputState& input,
                                 std::span<const Vec2> positions,
                                 const ControlParams& params);

// n perturbations (m cos psi, m sin psi), m ~ U[0, M u_max], psi ~ U[0, 2 pi).
// Always draws two numbers per robot so the stream position does not depend
// on M.
std::vector<Vec2> sample_noise(CounterRng& rng, std::size_t n, const NoiseConfig& noise,
                               const ControlParams& params);

// Elementwise sum. Throws ConfigError on a length mismatch.
std::vector<Vec2> total_force(std::span<const Vec2> control, std::span<const Vec2> noise);

// Tracks how long the current input has been held. The ramp restarts when
// the key direction changes or is released, or when the pointer is released.
class InputTracker {
 public:
  InputTracker(ControlScheme scheme, double dt) : scheme_(scheme), dt_(dt) {}

  InputState update(const ControlIntent& intent);

 private:
  ControlScheme scheme_;
  double dt_;
  Vec2 last_direction_;
  bool last_engaged_ = false;
  long held_ticks_ = 0;
};

}  // namespace swarm::control
