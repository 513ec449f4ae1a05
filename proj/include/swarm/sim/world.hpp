#pragma once

#include <span>
#include <vector>

#include "swarm/vec2.hpp"

namespace swarm::sim {

// Unit complex number representing a planar rotation. Integrated directly so
// the solver path never calls trigonometric functions.
struct Rotation {
  double c = 1.0;
  double s = 0.0;

  static Rotation from_angle(double radians);
  double angle() const;

  Vec2 apply(const Vec2& v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }
  Vec2 apply_inverse(const Vec2& v) const {
    return {c * v.x + s * v.y, -s * v.x + c * v.y};
  }
  // Rotate further by a small angle and renormalize.
  void integrate(double delta);

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

struct RobotBody {
  int id = 0;
  Vec2 position;
  Vec2 velocity;
  double radius = 0.15;
  double mass = 1.0;

  friend bool operator==(const RobotBody&, const RobotBody&) = default;
};

struct Pose {
  Vec2 position;
  double angle = 0.0;
};

struct Workpiece {
  int id = 0;
  std::vector<Vec2> local_vertices;  // convex, counter-clockwise, about the centroid
  Vec2 position;
  Rotation rotation;
  Vec2 linear_velocity;
  double angular_velocity = 0.0;
  double mass = 1.0;
  double moment = 1.0;

  Pose pose() const { return {position, rotation.angle()}; }
  std::vector<Vec2> world_vertices() const;

  friend bool operator==(const Workpiece&, const Workpiece&) = default;
};

struct Obstacle {
  std::vector<Vec2> vertices;  // world frame, convex, counter-clockwise

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct Arena {
  Vec2 min;
  Vec2 max;

  friend bool operator==(const Arena&, const Arena&) = default;
};

struct WorldParams {
  double dt = 1.0 / 60.0;
  double damping = 10.0;            // b, robots (1/s)
  double workpiece_damping = 10.0;  // linear and angular, workpieces (1/s)
  int solver_iterations = 8;
  double position_correction = 0.2;
  double penetration_tolerance = 5e-3;
  double friction = 0.2;  // Coulomb coefficient for contacts involving a workpiece

  friend bool operator==(const WorldParams&, const WorldParams&) = default;
};

struct World {
  Arena arena;
  std::vector<RobotBody> robots;
  std::vector<Workpiece> workpieces;
  std::vector<Obstacle> obstacles;
  WorldParams params;

  friend bool operator==(const World&, const World&) = default;
};

// Throws ConfigError when a polygon is degenerate (fewer than 3 vertices,
// non-convex, clockwise), a mass or radius is non-positive, a value is not
// finite, or a parameter is out of range.
void validate_world(const World& world);

// Builds a workpiece from a convex CCW outline given in any frame: the
// outline is re-centered on its centroid and mass/moment follow from density.
Workpiece make_workpiece(int id, std::span<const Vec2> outline, double angle,
                         double density);

double polygon_area(std::span<const Vec2> vertices);
Vec2 polygon_centroid(std::span<const Vec2> vertices);
bool is_convex_ccw(std::span<const Vec2> vertices);

}  // namespace swarm::sim
