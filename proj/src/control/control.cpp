#include "swarm/control/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarm/error.hpp"

namespace swarm::control {
namespace {

Vec2 sign_vector(const Vec2& v) {
  auto sgn = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
  return {sgn(v.x), sgn(v.y)};
}

}  // namespace

double ramp_magnitude(double held_duration, const ControlParams& params) {
  return params.u_max * std::min(std::max(held_duration, 0.0) / params.ramp_time, 1.0);
}

std::vector<Vec2> control_forces(ControlScheme scheme, const InputState& input,
                                 std::span<const Vec2> positions,
                                 const ControlParams& params) {
  if (positions.empty()) throw ConfigError("control_forces needs at least one robot");
  const double magnitude = ramp_magnitude(input.held_duration, params);
  std::vector<Vec2> out(positions.size());
  if (scheme == ControlScheme::kGlobalForce) {
    const Vec2 f = normalize_or_zero(sign_vector(input.key_direction)) * magnitude;
    std::fill(out.begin(), out.end(), f);
    return out;
  }
  if (!input.pointer_engaged) return out;
  const double sign = scheme == ControlScheme::kAttractivePoint ? 1.0 : -1.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec2 to_pointer = input.pointer - positions[i];
    const double dist = length(to_pointer);
    if (dist < params.attract_epsilon) continue;
    out[i] = to_pointer * (sign * magnitude / dist);
  }
  return out;
}

std::vector<Vec2> sample_noise(CounterRng& rng, std::size_t n, const NoiseConfig& noise,
                               const ControlParams& params) {
  const double bound = noise.max_fraction * params.u_max;
  std::vector<Vec2> out(n);
  for (Vec2& v : out) {
    const double m = bound * rng.next_unit();
    const double psi = 2.0 * M_PI * rng.next_unit();
    v = {m * std::cos(psi), m * std::sin(psi)};
  }
  return out;
}

std::vector<Vec2> total_force(std::span<const Vec2> control, std::span<const Vec2> noise) {
  if (control.size() != noise.size()) {
    throw ConfigError("total_force: " + std::to_string(control.size()) +
                      " control vectors but " + std::to_string(noise.size()) +
                      " noise vectors");
  }
  std::vector<Vec2> out(control.size());
  for (std::size_t i = 0; i < control.size(); ++i) out[i] = control[i] + noise[i];
  return out;
}

InputState InputTracker::update(const ControlIntent& intent) {
  const Vec2 direction = sign_vector(intent.key_direction);
  bool active;
  bool changed;
  if (scheme_ == ControlScheme::kGlobalForce) {
    active = direction != Vec2{};
    changed = direction != last_direction_;
  } else {
    active = intent.pointer_engaged;
    changed = intent.pointer_engaged != last_engaged_;
  }
  last_direction_ = direction;
  last_engaged_ = intent.pointer_engaged;
  if (!active || changed) held_ticks_ = 0;
  if (active) ++held_ticks_;

  InputState s;
  s.key_direction = direction;
  s.pointer = intent.pointer;
  s.pointer_engaged = intent.pointer_engaged;
  s.held_duration = static_cast<double>(held_ticks_) * dt_;
  return s;
}

}  // namespace swarm::control
