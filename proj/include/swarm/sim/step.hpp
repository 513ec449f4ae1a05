#pragma once

#include <span>

#include "swarm/sim/world.hpp"

namespace swarm::sim {

// Advances the world by one fixed step:
//   1. v += F/m dt, then v *= 1/(1 + b dt) (same law for workpiece spin),
//   2. sequential-impulse contact resolution (solver_iterations passes),
//   3. x += v dt,
//   4. positional projection of residual penetration.
// Identical inputs give bit-identical outputs. Throws ConfigError when the
// force counts do not match the body counts.
void step_world_in_place(World& world, std::span<const Vec2> robot_forces,
                         std::span<const Vec2> workpiece_forces);

World step_world(World world, std::span<const Vec2> robot_forces,
                 std::span<const Vec2> workpiece_forces);

// Deepest penetration among current contacts, 0 when none overlap.
double max_penetration(const World& world);

}  // namespace swarm::sim
