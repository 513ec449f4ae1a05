#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "swarm/error.hpp"
#include "swarm/rng.hpp"
#include "swarm/sim/contacts.hpp"

namespace swarm::sim {
namespace {

World empty_world() {
  World w;
  w.arena = {{-50.0, -50.0}, {50.0, 50.0}};
  return w;
}

RobotBody disc(int id, Vec2 p, double r = 1.0) {
  RobotBody b;
  b.id = id;
  b.position = p;
  b.radius = r;
  return b;
}

std::vector<Vec2> regular_polygon(Vec2 c, double radius, int sides, double phase) {
  std::vector<Vec2> v;
  for (int i = 0; i < sides; ++i) {
    const double a = phase + 2.0 * M_PI * i / sides;
    v.push_back(c + Vec2{radius * std::cos(a), radius * std::sin(a)});
  }
  return v;
}

TEST(ComputeContacts, SeparatedDiscsGiveNothing) {
  World w = empty_world();
  w.robots = {disc(0, {0, 0}), disc(1, {3, 0})};
  EXPECT_TRUE(compute_contacts(w).empty());
}

TEST(ComputeContacts, OverlappingDiscs) {
  World w = empty_world();
  w.robots = {disc(0, {0, 0}), disc(1, {1.5, 0})};
  const auto contacts = compute_contacts(w);
  ASSERT_EQ(contacts.size(), 1u);
  EXPECT_EQ(contacts[0].a, (BodyRef{BodyKind::kRobot, 0}));
  EXPECT_EQ(contacts[0].b, (BodyRef{BodyKind::kRobot, 1}));
  EXPECT_DOUBLE_EQ(contacts[0].normal.x, 1.0);
  EXPECT_DOUBLE_EQ(contacts[0].normal.y, 0.0);
  EXPECT_DOUBLE_EQ(contacts[0].depth, 0.5);
}

// Closest-feature oracle: densely sample the polygon boundary and take the
// nearest sample to the disc center.
struct SampledClosest {
  Vec2 point;
  double distance;
};

SampledClosest closest_boundary_sample(const std::vector<Vec2>& poly, Vec2 c) {
  SampledClosest best{{}, 1e300};
  const int per_edge = 4000;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % poly.size()];
    for (int k = 0; k <= per_edge; ++k) {
      const Vec2 p = a + (b - a) * (static_cast<double>(k) / per_edge);
      const double d = length(p - c);
      if (d < best.distance) best = {p, d};
    }
  }
  return best;
}

TEST(ComputeContacts, DiscAgainstSquareMatchesSampledOracle) {
  World w = empty_world();
  w.robots = {disc(0, {0, 0.5})};
  const std::vector<Vec2> square = {{-2, 1}, {2, 1}, {2, 2}, {-2, 2}};
  w.obstacles = {{square}};
  const auto contacts = compute_contacts(w);
  ASSERT_EQ(contacts.size(), 1u);

  const SampledClosest oracle = closest_boundary_sample(square, {0, 0.5});
  const double oracle_depth = 1.0 - oracle.distance;
  const Vec2 oracle_normal = normalize_or_zero(oracle.point - Vec2{0, 0.5});
  EXPECT_NEAR(contacts[0].depth, oracle_depth, 1e-3);
  EXPECT_NEAR(contacts[0].normal.x, oracle_normal.x, 1e-3);
  EXPECT_NEAR(contacts[0].normal.y, oracle_normal.y, 1e-3);
  // Frozen values from the oracle.
  EXPECT_NEAR(contacts[0].depth, 0.5, 1e-12);
  EXPECT_NEAR(contacts[0].normal.y, 1.0, 1e-12);
}

TEST(ComputeContacts, DiscNearPolygonCornerMatchesSampledOracle) {
  const std::vector<Vec2> square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CounterRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 c{rng.uniform(-1.0, 3.0), rng.uniform(-1.0, 3.0)};
    const bool inside = c.x > 0 && c.x < 2 && c.y > 0 && c.y < 2;
    if (inside) continue;
    World w = empty_world();
    w.robots = {disc(0, c, 0.6)};
    w.obstacles = {{square}};
    const auto contacts = compute_contacts(w);
    const SampledClosest oracle = closest_boundary_sample(square, c);
    if (oracle.distance > 0.6 + 1e-3) {
      EXPECT_TRUE(contacts.empty());
    } else if (oracle.distance < 0.6 - 1e-3) {
      ASSERT_EQ(contacts.size(), 1u);
      EXPECT_NEAR(contacts[0].depth, 0.6 - oracle.distance, 1e-3);
    }
  }
}

TEST(ComputeContacts, OverlappingSquaresGiveTwoPointManifold) {
  World w = empty_world();
  const std::vector<Vec2> a = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<Vec2> b = {{0.9, 0.2}, {1.9, 0.2}, {1.9, 1.2}, {0.9, 1.2}};
  w.workpieces = {make_workpiece(0, a, 0.0, 1.0), make_workpiece(1, b, 0.0, 1.0)};
  const auto contacts = compute_contacts(w);
  ASSERT_EQ(contacts.size(), 2u);
  for (const Contact& c : contacts) {
    EXPECT_NEAR(c.normal.x, 1.0, 1e-12);
    EXPECT_NEAR(c.normal.y, 0.0, 1e-12);
    EXPECT_NEAR(c.depth, 0.1, 1e-12);
  }
}

bool point_in_convex(const std::vector<Vec2>& poly, Vec2 p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (cross(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]) < 0.0) return false;
  }
  return true;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Independent of the separating-axis route: containment or edge crossing.
bool polygons_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  for (const Vec2& v : a) if (point_in_convex(b, v)) return true;
  for (const Vec2& v : b) if (point_in_convex(a, v)) return true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_cross(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) {
        return true;
      }
    }
  }
  return false;
}

TEST(ComputeContacts, PolygonPairsAgreeWithIntersectionOracle) {
  CounterRng rng(5);
  int overlapping = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = regular_polygon({0, 0}, rng.uniform(0.5, 1.5),
                                   3 + static_cast<int>(rng.below(5)), rng.uniform(0, 6.3));
    const auto b = regular_polygon({rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                   rng.uniform(0.5, 1.5), 3 + static_cast<int>(rng.below(5)),
                                   rng.uniform(0, 6.3));
    World w = empty_world();
    w.workpieces = {make_workpiece(0, a, 0.0, 1.0)};
    w.obstacles = {{b}};
    const auto contacts = compute_contacts(w);
    const bool expected = polygons_overlap(a, b);
    overlapping += expected;
    ASSERT_EQ(!contacts.empty(), expected) << "trial " << trial;
    for (const Contact& c : contacts) {
      EXPECT_NEAR(length(c.normal), 1.0, 1e-12);
      EXPECT_GT(c.depth, 0.0);
    }
  }
  EXPECT_GT(overlapping, 200);
}

TEST(ComputeContacts, DiscPairsHaveNoFalsePositives) {
  CounterRng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    World w = empty_world();
    for (int i = 0; i < 30; ++i) {
      w.robots.push_back(disc(i, {rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.1, 0.6)));
    }
    std::size_t expected = 0;
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
      for (std::size_t j = i + 1; j < w.robots.size(); ++j) {
        if (length(w.robots[i].position - w.robots[j].position) <
            w.robots[i].radius + w.robots[j].radius) {
          ++expected;
        }
      }
    }
    EXPECT_EQ(compute_contacts(w).size(), expected);
  }
}

TEST(ComputeContacts, ArenaWalls) {
  World w;
  w.arena = {{0, 0}, {10, 10}};
  w.robots = {disc(0, {0.4, 5.0}, 0.5)};
  const auto contacts = compute_contacts(w);
  ASSERT_EQ(contacts.size(), 1u);
  EXPECT_EQ(contacts[0].b, (BodyRef{BodyKind::kWall, 0}));
  EXPECT_DOUBLE_EQ(contacts[0].normal.x, -1.0);
  EXPECT_NEAR(contacts[0].depth, 0.1, 1e-12);
}

TEST(ValidateWorld, RejectsDegeneratePolygons) {
  World w = empty_world();
  w.obstacles = {{{{0, 0}, {1, 0}}}};
  EXPECT_THROW(validate_world(w), ConfigError);
  // Non-convex dart.
  w.obstacles = {{{{0, 0}, {2, 0}, {1, 0.2}, {1, 2}}}};
  EXPECT_THROW(validate_world(w), ConfigError);
  // Clockwise.
  w.obstacles = {{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}};
  EXPECT_THROW(validate_world(w), ConfigError);
  w.obstacles = {{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}};
  EXPECT_NO_THROW(validate_world(w));
  const std::vector<Vec2> dart = {{0, 0}, {2, 0}, {1, 0.2}, {1, 2}};
  EXPECT_THROW(make_workpiece(0, dart, 0.0, 1.0), ConfigError);
}

TEST(MakeWorkpiece, MassAndMomentOfUnitSquare) {
  const std::vector<Vec2> square = {{2, 2}, {3, 2}, {3, 3}, {2, 3}};
  const Workpiece w = make_workpiece(0, square, 0.0, 2.0);
  EXPECT_NEAR(w.mass, 2.0, 1e-12);
  // m (a^2 + a^2) / 12
  EXPECT_NEAR(w.moment, 2.0 * 2.0 / 12.0, 1e-12);
  EXPECT_NEAR(w.position.x, 2.5, 1e-12);
  EXPECT_NEAR(w.position.y, 2.5, 1e-12);
}

}  // namespace
}  // namespace swarm::sim
