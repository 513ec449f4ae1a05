#pragma once

#include <vector>

#include "swarm/sim/world.hpp"

namespace swarm::sim {

enum class BodyKind { kRobot, kWorkpiece, kObstacle, kWall };

struct BodyRef {
  BodyKind kind = BodyKind::kRobot;
  int index = 0;  // for walls: 0 left, 1 right, 2 bottom, 3 top

  friend bool operator==(const BodyRef&, const BodyRef&) = default;
};

struct Contact {
  BodyRef a;
  BodyRef b;
  Vec2 normal;  // unit, from a to b
  double depth = 0.0;
  Vec2 point;
};

// Every overlapping pair in the world. Pairs are ordered robots before
// workpieces before obstacles before walls, lower index first, and the
// normal points from the first body to the second. Polygon pairs may yield
// up to two contacts (a clipped manifold).
std::vector<Contact> compute_contacts(const World& world);

namespace detail {

// Candidate pair for narrow phase.
struct BodyPair {
  BodyRef a;
  BodyRef b;
};

struct ManifoldPoint {
  Vec2 point;
  double depth = 0.0;  // negative means separated by -depth
};

struct Manifold {
  Vec2 normal;
  int count = 0;
  ManifoldPoint points[2];
};

// Pairs whose bounding boxes, grown by margin, overlap.
std::vector<BodyPair> find_pairs(const World& world, double margin);

// Narrow phase for one pair. Points with depth < -margin are dropped.
Manifold collide(const World& world, const BodyPair& pair, double margin);

Manifold collide_discs(Vec2 ca, double ra, Vec2 cb, double rb, double margin);
// Normal from the disc to the polygon.
Manifold collide_disc_polygon(Vec2 c, double r, std::span<const Vec2> poly,
                              double margin);
// Normal from polygon a to polygon b.
Manifold collide_polygons(std::span<const Vec2> a, std::span<const Vec2> b,
                          double margin);

}  // namespace detail
}  // namespace swarm::sim
