#include "swarm/sim/contacts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace swarm::sim {
namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  Vec2 lo;
  Vec2 hi;
};

Box disc_box(const RobotBody& r) {
  return {{r.position.x - r.radius, r.position.y - r.radius},
          {r.position.x + r.radius, r.position.y + r.radius}};
}

Box poly_box(std::span<const Vec2> verts) {
  Box b{{kInf, kInf}, {-kInf, -kInf}};
  for (const Vec2& v : verts) {
    b.lo.x = std::min(b.lo.x, v.x);
    b.lo.y = std::min(b.lo.y, v.y);
    b.hi.x = std::max(b.hi.x, v.x);
    b.hi.y = std::max(b.hi.y, v.y);
  }
  return b;
}

bool boxes_near(const Box& a, const Box& b, double margin) {
  return a.lo.x <= b.hi.x + margin && b.lo.x <= a.hi.x + margin &&
         a.lo.y <= b.hi.y + margin && b.lo.y <= a.hi.y + margin;
}

// Walls the box is within margin of, as wall indices.
template <typename F>
void for_near_walls(const Box& b, const Arena& arena, double margin, F&& f) {
  if (b.lo.x < arena.min.x + margin) f(0);
  if (b.hi.x > arena.max.x - margin) f(1);
  if (b.lo.y < arena.min.y + margin) f(2);
  if (b.hi.y > arena.max.y - margin) f(3);
}

auto pair_key(const BodyPair& p) {
  return std::make_tuple(static_cast<int>(p.a.kind), p.a.index,
                         static_cast<int>(p.b.kind), p.b.index);
}

// Outward normal and offset of wall w, as a half-plane n.x <= offset.
void wall_plane(const Arena& arena, int w, Vec2& n, double& offset) {
  switch (w) {
    case 0: n = {-1.0, 0.0}; offset = -arena.min.x; break;
    case 1: n = {1.0, 0.0}; offset = arena.max.x; break;
    case 2: n = {0.0, -1.0}; offset = -arena.min.y; break;
    default: n = {0.0, 1.0}; offset = arena.max.y; break;
  }
}

Manifold collide_disc_wall(Vec2 c, double r, const Arena& arena, int w,
                           double margin) {
  Manifold m;
  Vec2 n;
  double offset;
  wall_plane(arena, w, n, offset);
  const double depth = dot(n, c) + r - offset;
  if (depth < -margin) return m;
  m.normal = n;
  m.count = 1;
  m.points[0] = {c + n * (r - depth), depth};
  return m;
}

Manifold collide_polygon_wall(std::span<const Vec2> verts, const Arena& arena,
                              int w, double margin) {
  Manifold m;
  Vec2 n;
  double offset;
  wall_plane(arena, w, n, offset);
  m.normal = n;
  for (const Vec2& v : verts) {
    const double depth = dot(n, v) - offset;
    if (depth < -margin) continue;
    ManifoldPoint p{v, depth};
    if (m.count < 2) {
      m.points[m.count++] = p;
    } else {
      // Keep the two deepest.
      int shallow = m.points[0].depth < m.points[1].depth ? 0 : 1;
      if (p.depth > m.points[shallow].depth) m.points[shallow] = p;
    }
  }
  if (m.count == 2 && m.points[1].depth > m.points[0].depth) {
    std::swap(m.points[0], m.points[1]);
  }
  return m;
}

Vec2 edge_normal(std::span<const Vec2> poly, std::size_t i) {
  const Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
  return normalize_or_zero(Vec2{e.y, -e.x});
}

// Largest separation of b from the edges of a.
double max_separation(std::span<const Vec2> a, std::span<const Vec2> b,
                      std::size_t& edge) {
  double best = -kInf;
  edge = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 n = edge_normal(a, i);
    double s = kInf;
    for (const Vec2& v : b) s = std::min(s, dot(n, v - a[i]));
    if (s > best) {
      best = s;
      edge = i;
    }
  }
  return best;
}

// Keeps the part of segment [p0, p1] where dot(n, p) <= offset.
int clip_segment(const Vec2 in[2], Vec2 out[2], Vec2 n, double offset) {
  int count = 0;
  const double d0 = dot(n, in[0]) - offset;
  const double d1 = dot(n, in[1]) - offset;
  if (d0 <= 0.0) out[count++] = in[0];
  if (d1 <= 0.0) out[count++] = in[1];
  if (d0 * d1 < 0.0) {
    const double t = d0 / (d0 - d1);
    out[count++] = in[0] + (in[1] - in[0]) * t;
  }
  return count;
}

}  // namespace

Manifold collide_discs(Vec2 ca, double ra, Vec2 cb, double rb, double margin) {
  Manifold m;
  const Vec2 d = cb - ca;
  const double dist2 = length_squared(d);
  const double reach = ra + rb + margin;
  if (dist2 > reach * reach) return m;
  const double dist = std::sqrt(dist2);
  m.normal = dist > 0.0 ? d / dist : Vec2{1.0, 0.0};
  const double depth = ra + rb - dist;
  m.count = 1;
  m.points[0] = {ca + m.normal * (ra - 0.5 * depth), depth};
  return m;
}

Manifold collide_disc_polygon(Vec2 c, double r, std::span<const Vec2> poly,
                              double margin) {
  Manifold m;
  const std::size_t n = poly.size();
  double sep = -kInf;
  std::size_t edge = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = dot(edge_normal(poly, i), c - poly[i]);
    if (s > r + margin) return m;
    if (s > sep) {
      sep = s;
      edge = i;
    }
  }
  const Vec2 v1 = poly[edge];
  const Vec2 v2 = poly[(edge + 1) % n];
  const Vec2 face_n = edge_normal(poly, edge);

  Vec2 outward;  // from polygon toward disc
  double depth;
  Vec2 point;
  if (sep <= 0.0) {
    outward = face_n;
    depth = r - sep;
    point = c - face_n * sep;
  } else if (dot(c - v1, v2 - v1) <= 0.0 || dot(c - v2, v1 - v2) <= 0.0) {
    const Vec2 v = dot(c - v1, v2 - v1) <= 0.0 ? v1 : v2;
    const double dist = length(c - v);
    if (dist > r + margin) return m;
    outward = dist > 0.0 ? (c - v) / dist : face_n;
    depth = r - dist;
    point = v;
  } else {
    outward = face_n;
    depth = r - sep;
    point = c - face_n * sep;
  }
  m.normal = -outward;
  m.count = 1;
  m.points[0] = {point, depth};
  return m;
}

Manifold collide_polygons(std::span<const Vec2> a, std::span<const Vec2> b,
                          double margin) {
  Manifold m;
  std::size_t edge_a = 0;
  std::size_t edge_b = 0;
  const double sep_a = max_separation(a, b, edge_a);
  if (sep_a > margin) return m;
  const double sep_b = max_separation(b, a, edge_b);
  if (sep_b > margin) return m;

  // Prefer a as reference unless b is clearly better; keeps manifolds stable.
  const bool flip = sep_b > sep_a + 5e-4;
  const std::span<const Vec2> ref = flip ? b : a;
  const std::span<const Vec2> inc = flip ? a : b;
  const std::size_t ref_edge = flip ? edge_b : edge_a;
  const Vec2 ref_n = edge_normal(ref, ref_edge);

  std::size_t inc_edge = 0;
  double min_dot = kInf;
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const double d = dot(ref_n, edge_normal(inc, i));
    if (d < min_dot) {
      min_dot = d;
      inc_edge = i;
    }
  }
  const Vec2 incident[2] = {inc[inc_edge], inc[(inc_edge + 1) % inc.size()]};

  const Vec2 v11 = ref[ref_edge];
  const Vec2 v12 = ref[(ref_edge + 1) % ref.size()];
  const Vec2 tangent = normalize_or_zero(v12 - v11);

  Vec2 clip1[2];
  Vec2 clip2[2];
  if (clip_segment(incident, clip1, -tangent, -dot(tangent, v11)) < 2) return m;
  if (clip_segment(clip1, clip2, tangent, dot(tangent, v12)) < 2) return m;

  const double front = dot(ref_n, v11);
  m.normal = flip ? -ref_n : ref_n;
  for (const Vec2& p : clip2) {
    const double separation = dot(ref_n, p) - front;
    if (separation <= margin) m.points[m.count++] = {p, -separation};
  }
  return m;
}

std::vector<BodyPair> find_pairs(const World& world, double margin) {
  std::vector<BodyPair> pairs;
  const auto& robots = world.robots;
  const std::size_t nr = robots.size();

  std::vector<Box> wp_boxes;
  for (const Workpiece& w : world.workpieces) {
    wp_boxes.push_back(poly_box(w.world_vertices()));
  }
  std::vector<Box> ob_boxes;
  for (const Obstacle& o : world.obstacles) ob_boxes.push_back(poly_box(o.vertices));

  // Robot-robot through a uniform grid.
  if (nr > 1) {
    double max_r = 0.0;
    for (const RobotBody& r : robots) max_r = std::max(max_r, r.radius);
    const double cell = 2.0 * max_r + margin;
    const Vec2 origin = world.arena.min - Vec2{cell, cell};
    const Vec2 span = world.arena.max - world.arena.min;
    const int cols = static_cast<int>(span.x / cell) + 3;
    const int rows = static_cast<int>(span.y / cell) + 3;
    auto cell_of = [&](const Vec2& p, int& cx, int& cy) {
      cx = std::clamp(static_cast<int>(std::floor((p.x - origin.x) / cell)), 0, cols - 1);
      cy = std::clamp(static_cast<int>(std::floor((p.y - origin.y) / cell)), 0, rows - 1);
    };
    // Counting sort of robots into cells.
    std::vector<int> start(static_cast<std::size_t>(cols) * rows + 1, 0);
    std::vector<int> cell_index(nr);
    for (std::size_t i = 0; i < nr; ++i) {
      int cx, cy;
      cell_of(robots[i].position, cx, cy);
      cell_index[i] = cy * cols + cx;
      ++start[cell_index[i] + 1];
    }
    for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
    std::vector<int> fill(start.begin(), start.end() - 1);
    std::vector<int> sorted(nr);
    for (std::size_t i = 0; i < nr; ++i) sorted[fill[cell_index[i]]++] = static_cast<int>(i);

    for (std::size_t i = 0; i < nr; ++i) {
      const int cx0 = cell_index[i] % cols;
      const int cy0 = cell_index[i] / cols;
      for (int cy = std::max(0, cy0 - 1); cy <= std::min(rows - 1, cy0 + 1); ++cy) {
        for (int cx = std::max(0, cx0 - 1); cx <= std::min(cols - 1, cx0 + 1); ++cx) {
          const int c = cy * cols + cx;
          for (int k = start[c]; k < start[c + 1]; ++k) {
            const int j = sorted[k];
            if (j <= static_cast<int>(i)) continue;
            const double reach = robots[i].radius + robots[j].radius + margin;
            if (length_squared(robots[j].position - robots[i].position) <= reach * reach) {
              pairs.push_back({{BodyKind::kRobot, static_cast<int>(i)},
                               {BodyKind::kRobot, j}});
            }
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < nr; ++i) {
    const Box rb = disc_box(robots[i]);
    const BodyRef me{BodyKind::kRobot, static_cast<int>(i)};
    for (std::size_t w = 0; w < wp_boxes.size(); ++w) {
      if (boxes_near(rb, wp_boxes[w], margin)) {
        pairs.push_back({me, {BodyKind::kWorkpiece, static_cast<int>(w)}});
      }
    }
    for (std::size_t o = 0; o < ob_boxes.size(); ++o) {
      if (boxes_near(rb, ob_boxes[o], margin)) {
        pairs.push_back({me, {BodyKind::kObstacle, static_cast<int>(o)}});
      }
    }
    for_near_walls(rb, world.arena, margin,
                   [&](int w) { pairs.push_back({me, {BodyKind::kWall, w}}); });
  }

  for (std::size_t i = 0; i < wp_boxes.size(); ++i) {
    const BodyRef me{BodyKind::kWorkpiece, static_cast<int>(i)};
    for (std::size_t j = i + 1; j < wp_boxes.size(); ++j) {
      if (boxes_near(wp_boxes[i], wp_boxes[j], margin)) {
        pairs.push_back({me, {BodyKind::kWorkpiece, static_cast<int>(j)}});
      }
    }
    for (std::size_t o = 0; o < ob_boxes.size(); ++o) {
      if (boxes_near(wp_boxes[i], ob_boxes[o], margin)) {
        pairs.push_back({me, {BodyKind::kObstacle, static_cast<int>(o)}});
      }
    }
    for_near_walls(wp_boxes[i], world.arena, margin,
                   [&](int w) { pairs.push_back({me, {BodyKind::kWall, w}}); });
  }

  std::sort(pairs.begin(), pairs.end(), [](const BodyPair& x, const BodyPair& y) {
    return pair_key(x) < pair_key(y);
  });
  return pairs;
}

Manifold collide(const World& world, const BodyPair& pair, double margin) {
  const RobotBody* robot = pair.a.kind == BodyKind::kRobot
                               ? &world.robots[pair.a.index]
                               : nullptr;
  if (robot != nullptr) {
    switch (pair.b.kind) {
      case BodyKind::kRobot: {
        const RobotBody& other = world.robots[pair.b.index];
        return collide_discs(robot->position, robot->radius, other.position,
                             other.radius, margin);
      }
      case BodyKind::kWorkpiece: {
        const auto verts = world.workpieces[pair.b.index].world_vertices();
        return collide_disc_polygon(robot->position, robot->radius, verts, margin);
      }
      case BodyKind::kObstacle:
        return collide_disc_polygon(robot->position, robot->radius,
                                    world.obstacles[pair.b.index].vertices, margin);
      case BodyKind::kWall:
        return collide_disc_wall(robot->position, robot->radius, world.arena,
                                 pair.b.index, margin);
    }
  }
  const auto verts = world.workpieces[pair.a.index].world_vertices();
  switch (pair.b.kind) {
    case BodyKind::kWorkpiece:
      return collide_polygons(verts, world.workpieces[pair.b.index].world_vertices(),
                              margin);
    case BodyKind::kObstacle:
      return collide_polygons(verts, world.obstacles[pair.b.index].vertices, margin);
    case BodyKind::kWall:
      return collide_polygon_wall(verts, world.arena, pair.b.index, margin);
    case BodyKind::kRobot:
      break;
  }
  return {};
}

}  // namespace detail

std::vector<Contact> compute_contacts(const World& world) {
  std::vector<Contact> out;
  for (const detail::BodyPair& pair : detail::find_pairs(world, 0.0)) {
    const detail::Manifold m = detail::collide(world, pair, 0.0);
    for (int k = 0; k < m.count; ++k) {
      if (m.points[k].depth > 0.0) {
        out.push_back({pair.a, pair.b, m.normal, m.points[k].depth, m.points[k].point});
      }
    }
  }
  return out;
}

}  // namespace swarm::sim
