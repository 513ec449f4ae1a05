#include "swarm/sim/world.hpp"

#include <cmath>
#include <string>

#include "swarm/error.hpp"

namespace swarm::sim {

Rotation Rotation::from_angle(double radians) {
  return {std::cos(radians), std::sin(radians)};
}

double Rotation::angle() const { return std::atan2(s, c); }

void Rotation::integrate(double delta) {
  const double nc = c - s * delta;
  const double ns = s + c * delta;
  const double len = std::sqrt(nc * nc + ns * ns);
  c = nc / len;
  s = ns / len;
}

std::vector<Vec2> Workpiece::world_vertices() const {
  std::vector<Vec2> out;
  out.reserve(local_vertices.size());
  for (const Vec2& v : local_vertices) out.push_back(position + rotation.apply(v));
  return out;
}

double polygon_area(std::span<const Vec2> vertices) {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    twice += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> vertices) {
  // Triangle fan about the first vertex keeps cancellation small.
  const Vec2 origin = vertices[0];
  Vec2 acc;
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
    const Vec2 e1 = vertices[i] - origin;
    const Vec2 e2 = vertices[i + 1] - origin;
    const double a = 0.5 * cross(e1, e2);
    acc += (e1 + e2) * (a / 3.0);
    area += a;
  }
  return origin + acc / area;
}

bool is_convex_ccw(std::span<const Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[(i + 1) % n];
    const Vec2 c = vertices[(i + 2) % n];
    if (cross(b - a, c - b) <= 0.0) return false;
  }
  // Turning number one: a star polygon also has all left turns.
  return polygon_area(vertices) > 0.0 && [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
      const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
      total += std::atan2(cross(e1, e2), dot(e1, e2));
    }
    return std::abs(total - 2.0 * M_PI) < 1e-6;
  }();
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate_world(const World& world) {
  const WorldParams& p = world.params;
  require(finite(p.dt) && p.dt > 0.0, "dt must be positive");
  require(finite(p.damping) && p.damping >= 0.0, "damping must be non-negative");
  require(finite(p.workpiece_damping) && p.workpiece_damping >= 0.0,
          "workpiece damping must be non-negative");
  require(p.solver_iterations >= 1, "solver_iterations must be at least 1");
  require(p.position_correction > 0.0 && p.position_correction <= 1.0,
          "position_correction must lie in (0, 1]");
  require(p.penetration_tolerance > 0.0, "penetration_tolerance must be positive");
  require(p.friction >= 0.0, "friction must be non-negative");
  require(is_finite(world.arena.min) && is_finite(world.arena.max) &&
              world.arena.max.x > world.arena.min.x &&
              world.arena.max.y > world.arena.min.y,
          "arena must be a non-empty rectangle");

  for (const RobotBody& r : world.robots) {
    const std::string tag = "robot " + std::to_string(r.id);
    require(r.radius > 0.0 && finite(r.radius), tag + ": radius must be positive");
    require(r.mass > 0.0 && finite(r.mass), tag + ": mass must be positive");
    require(is_finite(r.position) && is_finite(r.velocity), tag + ": non-finite state");
  }
  for (const Workpiece& w : world.workpieces) {
    const std::string tag = "workpiece " + std::to_string(w.id);
    require(is_convex_ccw(w.local_vertices),
            tag + ": outline must be convex, counter-clockwise, with at least 3 vertices");
    require(w.mass > 0.0 && finite(w.mass), tag + ": mass must be positive");
    require(w.moment > 0.0 && finite(w.moment), tag + ": moment must be positive");
    require(is_finite(w.position) && is_finite(w.linear_velocity) &&
                finite(w.angular_velocity),
            tag + ": non-finite state");
  }
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    require(is_convex_ccw(world.obstacles[i].vertices),
            "obstacle " + std::to_string(i) +
                ": outline must be convex, counter-clockwise, with at least 3 vertices");
  }
}

Workpiece make_workpiece(int id, std::span<const Vec2> outline, double angle,
                         double density) {
  if (!is_convex_ccw(outline)) {
    throw ConfigError("workpiece " + std::to_string(id) +
                      ": outline must be convex, counter-clockwise, with at least 3 vertices");
  }
  if (!(density > 0.0)) throw ConfigError("workpiece density must be positive");
  const Vec2 centroid = polygon_centroid(outline);
  Workpiece w;
  w.id = id;
  w.position = centroid;
  w.rotation = Rotation::from_angle(angle);
  double twice_area = 0.0;
  double inertia = 0.0;
  for (std::size_t i = 0; i < outline.size(); ++i) {
    const Vec2 p = outline[i] - centroid;
    const Vec2 q = outline[(i + 1) % outline.size()] - centroid;
    w.local_vertices.push_back(p);
    const double c = cross(p, q);
    twice_area += c;
    inertia += c * (dot(p, p) + dot(p, q) + dot(q, q));
  }
  w.mass = density * 0.5 * twice_area;
  w.moment = density * inertia / 12.0;
  return w;
}

}  // namespace swarm::sim
