#include "swarm/sim/step.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "swarm/error.hpp"
#include "swarm/sim/contacts.hpp"

namespace swarm::sim {
namespace {

// Extra projection passes allowed beyond solver_iterations when a pile has
// not yet relaxed below the tolerance.
constexpr int kProjectionIterationFactor = 4;
// Largest single positional correction, in meters.
constexpr double kMaxCorrection = 0.1;
// Relaxation of the positional projection pass. The velocity pass carries
// the configured Baumgarte factor; this pass only mops up what a pile's
// Gauss-Seidel sweep leaves behind.
constexpr double kProjectionRelaxation = 0.8;

struct Constraint {
  int body_a = -1;  // solver body index, -1 for static
  int body_b = -1;
  Vec2 normal;
  Vec2 ra;
  Vec2 rb;
  double normal_mass = 0.0;
  double tangent_mass = 0.0;
  double bias = 0.0;
  double friction = 0.0;
  double normal_impulse = 0.0;
  double tangent_impulse = 0.0;
};

struct SolverBody {
  Vec2 v;
  double w = 0.0;
  double inv_mass = 0.0;
  double inv_moment = 0.0;
};

class Solver {
 public:
  explicit Solver(World& world) : world_(world) {
    const std::size_t nr = world.robots.size();
    bodies_.resize(nr + world.workpieces.size());
    for (std::size_t i = 0; i < nr; ++i) {
      bodies_[i].inv_mass = 1.0 / world.robots[i].mass;
    }
    for (std::size_t i = 0; i < world.workpieces.size(); ++i) {
      bodies_[nr + i].inv_mass = 1.0 / world.workpieces[i].mass;
      bodies_[nr + i].inv_moment = 1.0 / world.workpieces[i].moment;
    }
  }

  int body_index(const BodyRef& ref) const {
    switch (ref.kind) {
      case BodyKind::kRobot: return ref.index;
      case BodyKind::kWorkpiece: return static_cast<int>(world_.robots.size()) + ref.index;
      default: return -1;
    }
  }

  Vec2 center(int body) const {
    const std::size_t nr = world_.robots.size();
    if (body < 0) return {};
    if (static_cast<std::size_t>(body) < nr) return world_.robots[body].position;
    return world_.workpieces[body - nr].position;
  }

  void load_velocities() {
    const std::size_t nr = world_.robots.size();
    for (std::size_t i = 0; i < nr; ++i) bodies_[i].v = world_.robots[i].velocity;
    for (std::size_t i = 0; i < world_.workpieces.size(); ++i) {
      bodies_[nr + i].v = world_.workpieces[i].linear_velocity;
      bodies_[nr + i].w = world_.workpieces[i].angular_velocity;
    }
  }

  void store_velocities() {
    const std::size_t nr = world_.robots.size();
    for (std::size_t i = 0; i < nr; ++i) world_.robots[i].velocity = bodies_[i].v;
    for (std::size_t i = 0; i < world_.workpieces.size(); ++i) {
      world_.workpieces[i].linear_velocity = bodies_[nr + i].v;
      world_.workpieces[i].angular_velocity = bodies_[nr + i].w;
    }
  }

  double effective_mass(int a, int b, const Vec2& ra, const Vec2& rb,
                        const Vec2& dir) const {
    double k = 0.0;
    if (a >= 0) {
      const double rn = cross(ra, dir);
      k += bodies_[a].inv_mass + bodies_[a].inv_moment * rn * rn;
    }
    if (b >= 0) {
      const double rn = cross(rb, dir);
      k += bodies_[b].inv_mass + bodies_[b].inv_moment * rn * rn;
    }
    return k > 0.0 ? 1.0 / k : 0.0;
  }

  void prepare(const std::vector<detail::BodyPair>& pairs, double margin) {
    const double dt = world_.params.dt;
    slop_ = 0.25 * world_.params.penetration_tolerance;
    constraints_.clear();
    for (const detail::BodyPair& pair : pairs) {
      const detail::Manifold m = detail::collide(world_, pair, margin);
      const int a = body_index(pair.a);
      const int b = body_index(pair.b);
      const bool rough =
          pair.a.kind == BodyKind::kWorkpiece || pair.b.kind == BodyKind::kWorkpiece;
      for (int k = 0; k < m.count; ++k) {
        Constraint c;
        c.body_a = a;
        c.body_b = b;
        c.normal = m.normal;
        c.ra = m.points[k].point - center(a);
        c.rb = m.points[k].point - center(b);
        c.normal_mass = effective_mass(a, b, c.ra, c.rb, c.normal);
        c.tangent_mass = effective_mass(a, b, c.ra, c.rb, perp(c.normal));
        // Speculative: a separated pair may close its gap this step but no
        // more. Overlap beyond the slop is pushed apart with Baumgarte bias.
        const double depth = m.points[k].depth;
        c.bias = depth < 0.0 ? depth / dt
                             : world_.params.position_correction *
                                   std::max(0.0, depth - slop_) / dt;
        c.friction = rough ? world_.params.friction : 0.0;
        constraints_.push_back(c);
      }
    }
  }

  Vec2 relative_velocity(const Constraint& c) const {
    Vec2 v;
    if (c.body_b >= 0) v += bodies_[c.body_b].v + cross(bodies_[c.body_b].w, c.rb);
    if (c.body_a >= 0) v -= bodies_[c.body_a].v + cross(bodies_[c.body_a].w, c.ra);
    return v;
  }

  void apply_impulse(const Constraint& c, const Vec2& p) {
    if (c.body_a >= 0) {
      SolverBody& a = bodies_[c.body_a];
      a.v -= p * a.inv_mass;
      a.w -= a.inv_moment * cross(c.ra, p);
    }
    if (c.body_b >= 0) {
      SolverBody& b = bodies_[c.body_b];
      b.v += p * b.inv_mass;
      b.w += b.inv_moment * cross(c.rb, p);
    }
  }

  void solve_velocities() {
    for (int it = 0; it < world_.params.solver_iterations; ++it) {
      for (Constraint& c : constraints_) {
        if (c.friction > 0.0) {
          const Vec2 t = perp(c.normal);
          const double vt = dot(relative_velocity(c), t);
          const double limit = c.friction * c.normal_impulse;
          const double old = c.tangent_impulse;
          c.tangent_impulse = std::clamp(old - c.tangent_mass * vt, -limit, limit);
          apply_impulse(c, t * (c.tangent_impulse - old));
        }
        const double vn = dot(relative_velocity(c), c.normal);
        const double old = c.normal_impulse;
        c.normal_impulse = std::max(0.0, old - c.normal_mass * (vn - c.bias));
        apply_impulse(c, c.normal * (c.normal_impulse - old));
      }
    }
  }

  // Nonlinear Gauss-Seidel on positions over the step's candidate pairs.
  void project_positions(const std::vector<detail::BodyPair>& pairs) {
    const WorldParams& p = world_.params;
    const double slop = 0.25 * p.penetration_tolerance;
    slop_ = slop;
    const int max_iterations = kProjectionIterationFactor * p.solver_iterations;
    for (int it = 0; it < max_iterations; ++it) {
      double deepest = 0.0;
      for (const detail::BodyPair& pair : pairs) {
        const detail::Manifold m = detail::collide(world_, pair, 0.0);
        const int a = body_index(pair.a);
        const int b = body_index(pair.b);
        for (int k = 0; k < m.count; ++k) {
          const double depth = m.points[k].depth;
          deepest = std::max(deepest, depth);
          if (depth <= slop) continue;
          const Vec2 ra = m.points[k].point - center(a);
          const Vec2 rb = m.points[k].point - center(b);
          const double mass = effective_mass(a, b, ra, rb, m.normal);
          const double correction =
              std::min(kProjectionRelaxation * (depth - slop), kMaxCorrection);
          const Vec2 impulse = m.normal * (correction * mass);
          shift(a, ra, -impulse);
          shift(b, rb, impulse);
        }
      }
      if (it + 1 >= p.solver_iterations && deepest <= 0.5 * p.penetration_tolerance) {
        break;
      }
    }
  }

  void shift(int body, const Vec2& r, const Vec2& impulse) {
    if (body < 0) return;
    const std::size_t nr = world_.robots.size();
    const SolverBody& sb = bodies_[body];
    if (static_cast<std::size_t>(body) < nr) {
      world_.robots[body].position += impulse * sb.inv_mass;
    } else {
      Workpiece& w = world_.workpieces[body - nr];
      w.position += impulse * sb.inv_mass;
      w.rotation.integrate(sb.inv_moment * cross(r, impulse));
    }
  }

 private:
  World& world_;
  std::vector<SolverBody> bodies_;
  std::vector<Constraint> constraints_;
  double slop_ = 0.0;
};

void contain(World& world) {
  const Arena& arena = world.arena;
  for (RobotBody& r : world.robots) {
    r.position.x = std::clamp(r.position.x, arena.min.x + r.radius, arena.max.x - r.radius);
    r.position.y = std::clamp(r.position.y, arena.min.y + r.radius, arena.max.y - r.radius);
  }
  for (Workpiece& w : world.workpieces) {
    Vec2 lo{arena.max.x, arena.max.y};
    Vec2 hi{arena.min.x, arena.min.y};
    for (const Vec2& v : w.world_vertices()) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
    if (lo.x < arena.min.x) w.position.x += arena.min.x - lo.x;
    if (hi.x > arena.max.x) w.position.x -= hi.x - arena.max.x;
    if (lo.y < arena.min.y) w.position.y += arena.min.y - lo.y;
    if (hi.y > arena.max.y) w.position.y -= hi.y - arena.max.y;
  }
}

double bounding_radius(const Workpiece& w) {
  double r = 0.0;
  for (const Vec2& v : w.local_vertices) r = std::max(r, length(v));
  return r;
}

}  // namespace

void step_world_in_place(World& world, std::span<const Vec2> robot_forces,
                         std::span<const Vec2> workpiece_forces) {
  if (robot_forces.size() != world.robots.size()) {
    throw ConfigError("expected " + std::to_string(world.robots.size()) +
                      " robot forces, got " + std::to_string(robot_forces.size()));
  }
  if (workpiece_forces.size() != world.workpieces.size()) {
    throw ConfigError("expected " + std::to_string(world.workpieces.size()) +
                      " workpiece forces, got " + std::to_string(workpiece_forces.size()));
  }
  const WorldParams& p = world.params;
  const double dt = p.dt;
  const double robot_decay = 1.0 / (1.0 + p.damping * dt);
  const double piece_decay = 1.0 / (1.0 + p.workpiece_damping * dt);

  double max_travel = 0.0;
  for (std::size_t i = 0; i < world.robots.size(); ++i) {
    RobotBody& r = world.robots[i];
    r.velocity = (r.velocity + robot_forces[i] * (dt / r.mass)) * robot_decay;
    max_travel = std::max(max_travel, length(r.velocity) * dt);
  }
  for (std::size_t i = 0; i < world.workpieces.size(); ++i) {
    Workpiece& w = world.workpieces[i];
    w.linear_velocity = (w.linear_velocity + workpiece_forces[i] * (dt / w.mass)) * piece_decay;
    w.angular_velocity *= piece_decay;
    max_travel = std::max(max_travel, (length(w.linear_velocity) +
                                       std::abs(w.angular_velocity) * bounding_radius(w)) *
                                          dt);
  }

  // Two bodies may close on each other, and contact impulses may speed a
  // body up within the step.
  const double margin = 4.0 * max_travel + p.penetration_tolerance;
  const std::vector<detail::BodyPair> pairs = detail::find_pairs(world, margin);

  Solver solver(world);
  solver.load_velocities();
  solver.prepare(pairs, margin);
  solver.solve_velocities();
  solver.store_velocities();

  for (RobotBody& r : world.robots) r.position += r.velocity * dt;
  for (Workpiece& w : world.workpieces) {
    w.position += w.linear_velocity * dt;
    w.rotation.integrate(w.angular_velocity * dt);
  }

  solver.project_positions(pairs);
  contain(world);
}

World step_world(World world, std::span<const Vec2> robot_forces,
                 std::span<const Vec2> workpiece_forces) {
  step_world_in_place(world, robot_forces, workpiece_forces);
  return world;
}

double max_penetration(const World& world) {
  double deepest = 0.0;
  for (const Contact& c : compute_contacts(world)) deepest = std::max(deepest, c.depth);
  return deepest;
}

}  // namespace swarm::sim
