#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "swarm/error.hpp"
#include "swarm/sim/contacts.hpp"
#include "swarm/sim/step.hpp"
#include "swarm/tasks/matching.hpp"
#include "swarm/tasks/scenario.hpp"
#include "swarm/tasks/tasks.hpp"

namespace swarm::tasks {
namespace {

using control::ControlScheme;
using observe::ObservationMode;

TEST(Scenario, ParsesSectionsRepeatsAndComments) {
  const auto doc = ScenarioDocument::parse(
      "top = 1\n[a]\n# comment\nx = 1 2 3  # trailing\nitem = 1 2\nitem = 3 4\nname = maze\n");
  EXPECT_EQ(doc.number("", "top"), 1.0);
  EXPECT_EQ(doc.numbers("a", "x"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(doc.all_numbers("a", "item").size(), 2u);
  EXPECT_EQ(doc.word("a", "name"), "maze");
  EXPECT_TRUE(doc.has("a", "x"));
  EXPECT_FALSE(doc.has("a", "y"));
  EXPECT_THROW(doc.numbers("a", "item"), ConfigError);
  EXPECT_THROW(doc.number("a", "x"), ConfigError);
  EXPECT_THROW(doc.numbers("a", "name"), ConfigError);
  EXPECT_THROW(doc.number("b", "x"), ConfigError);
}

TEST(Scenario, RejectsMalformedLines) {
  EXPECT_THROW(ScenarioDocument::parse("[a\n"), ConfigError);
  EXPECT_THROW(ScenarioDocument::parse("[a]\njust words\n"), ConfigError);
  EXPECT_THROW(ScenarioDocument::parse("[a]\nk =\n"), ConfigError);
  try {
    ScenarioDocument::parse("[a]\nok = 1\n\nbroken\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Scenario, DigestTracksTheExactText) {
  const auto a = ScenarioDocument::parse("[a]\nx = 1\n");
  const auto b = ScenarioDocument::parse("[a]\nx = 1\n");
  const auto c = ScenarioDocument::parse("[a]\nx = 2\n");
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_NE(a.digest(), c.digest());
  EXPECT_EQ(a.digest().rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(a.digest().size(), 8u + 16u);
}

TEST(Scenario, DefaultDocumentMatchesShippedFile) {
  const auto& doc = default_scenarios();
  EXPECT_EQ(doc.integer("", "version"), 1);
  for (TaskKind k : kAllTaskKinds) EXPECT_TRUE(doc.has_section(to_string(k)));
}

TEST(SampleMode, DrawsStayInTheModeSets) {
  CounterRng rng(5);
  std::set<int> numbers;
  std::set<double> noises;
  for (int i = 0; i < 2000; ++i) {
    const auto n = std::get<VaryNumberMode>(sample_mode(TaskKind::kVaryNumber, rng));
    EXPECT_GE(n.robots, 1);
    EXPECT_LE(n.robots, 500);
    numbers.insert(n.robots);
    const auto m = std::get<VaryNoiseMode>(sample_mode(TaskKind::kVaryNoise, rng));
    EXPECT_GE(m.noise, 0.0);
    EXPECT_LE(m.noise, 2.0);
    noises.insert(m.noise);
    const auto p = std::get<PositionControlMode>(sample_mode(TaskKind::kPositionControl, rng));
    EXPECT_GE(p.robots, 1);
    EXPECT_LE(p.robots, 10);
  }
  EXPECT_EQ(numbers, (std::set<int>{1, 2, 5, 10, 20, 50, 100, 130, 200, 350, 500}));
  EXPECT_EQ(noises, (std::set<double>{0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}));
  EXPECT_EQ(mode_set(TaskKind::kVaryControl).size(), 3u);
  EXPECT_EQ(mode_set(TaskKind::kVaryVisualization).size(), 4u);
}

TEST(SampleMode, FixedSeedIsDeterministic) {
  for (TaskKind k : kAllTaskKinds) {
    CounterRng a(42), b(42);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_mode(k, a), sample_mode(k, b));
  }
}

TEST(ModeLabels, RoundTrip) {
  for (TaskKind k : kAllTaskKinds) {
    for (const TaskMode& m : mode_set(k)) {
      EXPECT_EQ(parse_mode(k, mode_label(m)), m) << mode_label(m);
    }
  }
  EXPECT_EQ(mode_label(VaryNoiseMode{1.5}), "noise=1.5");
  EXPECT_EQ(mode_label(VaryControlMode{ControlScheme::kRepulsivePoint}), "scheme=repulsive");
  EXPECT_THROW(parse_mode(TaskKind::kVaryNumber, "n=7"), ConfigError);
  EXPECT_THROW(parse_mode(TaskKind::kVaryNumber, "scheme=global"), ConfigError);
  EXPECT_THROW(parse_mode(TaskKind::kVaryNoise, "noise=3"), ConfigError);
  EXPECT_THROW(parse_mode(TaskKind::kVaryControl, "bogus"), ConfigError);
  EXPECT_THROW(task_kind_from_string("vary_everything"), ConfigError);
}

TEST(Instantiate, VaryControlHasSixteenRobotsAndThreeBlocks) {
  for (const TaskMode& m : mode_set(TaskKind::kVaryControl)) {
    const TaskState s = instantiate_task(TaskKind::kVaryControl, m, 1);
    EXPECT_EQ(s.world.robots.size(), 16u);
    EXPECT_EQ(s.world.workpieces.size(), 3u);
    EXPECT_TRUE(std::holds_alternative<PyramidGoal>(s.goal));
    EXPECT_EQ(s.settings.scheme, std::get<VaryControlMode>(m).scheme);
  }
}

TEST(Instantiate, VaryVisualizationHasOneHundredRobots) {
  for (const TaskMode& m : mode_set(TaskKind::kVaryVisualization)) {
    const TaskState s = instantiate_task(TaskKind::kVaryVisualization, m, 1);
    EXPECT_EQ(s.world.robots.size(), 100u);
    EXPECT_EQ(s.world.workpieces.size(), 1u);
    EXPECT_EQ(s.world.workpieces[0].local_vertices.size(), 6u);
    EXPECT_EQ(s.world.obstacles.size(), 1u);
    EXPECT_EQ(s.settings.observation, std::get<VaryVisualizationMode>(m).observation);
  }
}

TEST(Instantiate, VaryNumberHoldsTotalForceAreaAndSpeed) {
  const TaskState ref = instantiate_task(TaskKind::kVaryNumber, VaryNumberMode{100}, 3);
  const double b = ref.world.params.damping;
  const auto& r0 = ref.world.robots[0];
  const double total_force = 100 * ref.settings.control.u_max;
  const double total_area = 100 * r0.radius * r0.radius;
  const double v_max = ref.settings.control.u_max / (r0.mass * b);
  for (const TaskMode& m : mode_set(TaskKind::kVaryNumber)) {
    const int n = std::get<VaryNumberMode>(m).robots;
    const TaskState s = instantiate_task(TaskKind::kVaryNumber, m, 3);
    ASSERT_EQ(static_cast<int>(s.world.robots.size()), n);
    const auto& r = s.world.robots[0];
    EXPECT_NEAR(n * s.settings.control.u_max, total_force, 1e-9 * total_force);
    EXPECT_NEAR(n * r.radius * r.radius, total_area, 1e-9 * total_area);
    EXPECT_NEAR(s.settings.control.u_max / (r.mass * b), v_max, 1e-12 * v_max);
    EXPECT_EQ(s.world.obstacles.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<RegionGoal>(s.goal));
    EXPECT_EQ(sim::max_penetration(s.world), 0.0) << n;
  }
}

TEST(Instantiate, VaryNoiseReusesTheVisualizationCourse) {
  const TaskState vis = instantiate_task(TaskKind::kVaryVisualization,
                                         VaryVisualizationMode{ObservationMode::kMean}, 9);
  for (const TaskMode& m : mode_set(TaskKind::kVaryNoise)) {
    const TaskState s = instantiate_task(TaskKind::kVaryNoise, m, 9);
    EXPECT_EQ(s.world, vis.world);
    EXPECT_EQ(s.settings.observation, ObservationMode::kFullState);
    EXPECT_EQ(s.settings.noise.max_fraction, std::get<VaryNoiseMode>(m).noise);
  }
}

TEST(Instantiate, StartsAreSeparatedAndInsideThePocket) {
  for (TaskKind k : kAllTaskKinds) {
    for (const TaskMode& m : mode_set(k)) {
      for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
        const TaskState s = instantiate_task(k, m, seed);
        EXPECT_EQ(sim::max_penetration(s.world), 0.0) << to_string(k) << " " << mode_label(m);
        for (const auto& r : s.world.robots) {
          EXPECT_GE(r.position.x - r.radius, s.world.arena.min.x);
          EXPECT_LE(r.position.x + r.radius, s.world.arena.max.x);
        }
      }
    }
  }
}

TEST(Instantiate, PureFunctionOfKindModeSeed) {
  for (TaskKind k : kAllTaskKinds) {
    const TaskMode m = mode_set(k).front();
    const TaskState a = instantiate_task(k, m, 123);
    const TaskState b = instantiate_task(k, m, 123);
    const TaskState c = instantiate_task(k, m, 124);
    EXPECT_EQ(a.world, b.world);
    EXPECT_EQ(a.scenario_digest, default_scenarios().digest());
    if (a.world.robots.size() > 1 || k == TaskKind::kVaryNumber) {
      EXPECT_NE(a.world.robots, c.world.robots);
    }
  }
}

TEST(Instantiate, RejectsForeignOrUnknownModes) {
  EXPECT_THROW(instantiate_task(TaskKind::kVaryNumber, VaryControlMode{}, 1), ConfigError);
  EXPECT_THROW(instantiate_task(TaskKind::kVaryNumber, VaryNumberMode{3}, 1), ConfigError);
  EXPECT_THROW(instantiate_task(TaskKind::kPositionControl, PositionControlMode{11}, 1), ConfigError);
  EXPECT_THROW(instantiate_task(TaskKind::kVaryNoise, VaryNoiseMode{0.3}, 1), ConfigError);
}

// Independent hole count: 8-connected components minus the 8-connected
// Euler number from 2x2 bit-quad counts.
int holes_by_euler(const std::vector<Vec2>& pts, double spacing) {
  std::set<std::pair<int, int>> cells;
  for (const Vec2& p : pts) {
    cells.insert({static_cast<int>(std::lround(p.x / spacing)), static_cast<int>(std::lround(p.y / spacing))});
  }
  int min_c = 1 << 20, min_r = 1 << 20, max_c = -(1 << 20), max_r = -(1 << 20);
  for (auto [c, r] : cells) {
    min_c = std::min(min_c, c);
    min_r = std::min(min_r, r);
    max_c = std::max(max_c, c);
    max_r = std::max(max_r, r);
  }
  auto on = [&](int c, int r) { return cells.count({c, r}) > 0; };
  int q1 = 0, q3 = 0, qd = 0;
  for (int r = min_r - 1; r <= max_r; ++r) {
    for (int c = min_c - 1; c <= max_c; ++c) {
      const bool a = on(c, r), b = on(c + 1, r), d = on(c, r + 1), e = on(c + 1, r + 1);
      const int count = a + b + d + e;
      if (count == 1) ++q1;
      if (count == 3) ++q3;
      if (count == 2 && a == e) ++qd;
    }
  }
  const int euler = (q1 - q3 - 2 * qd) / 4;
  std::set<std::pair<int, int>> seen;
  int components = 0;
  for (auto start : cells) {
    if (seen.count(start)) continue;
    ++components;
    std::vector<std::pair<int, int>> stack = {start};
    seen.insert(start);
    while (!stack.empty()) {
      auto [c, r] = stack.back();
      stack.pop_back();
      for (int dc = -1; dc <= 1; ++dc) {
        for (int dr = -1; dr <= 1; ++dr) {
          const std::pair<int, int> q{c + dc, r + dr};
          if (cells.count(q) && !seen.count(q)) {
            seen.insert(q);
            stack.push_back(q);
          }
        }
      }
    }
  }
  return components - euler;
}

TEST(GoalPattern, BlockAShape) {
  const auto& doc = default_scenarios();
  const double spacing = doc.number("position_control", "pattern_spacing");
  const auto full = goal_pattern(10);
  ASSERT_EQ(full.size(), 10u);
  std::set<std::pair<double, double>> distinct;
  for (const Vec2& p : full) distinct.insert({p.x, p.y});
  EXPECT_EQ(distinct.size(), 10u);
  EXPECT_EQ(goal_pattern(1).size(), 1u);
  for (int n = 1; n <= 10; ++n) {
    const auto pts = goal_pattern(n);
    EXPECT_TRUE(std::equal(pts.begin(), pts.end(), full.begin()));
    const auto cells = pattern_cells(n);
    const bool hollow = n >= 5;
    EXPECT_EQ(cells_enclose_void(cells), hollow) << n;
    EXPECT_EQ(holes_by_euler(pts, spacing) > 0, hollow) << n;
  }
  EXPECT_EQ(holes_by_euler(full, spacing), 1);
  EXPECT_THROW(goal_pattern(0), ConfigError);
  EXPECT_THROW(goal_pattern(11), ConfigError);
}

// Exhaustive assignment oracle with pruning; visits every permutation
// that is still feasible.
bool matching_oracle(const std::vector<Vec2>& r, const std::vector<Vec2>& g, double tol,
                     std::size_t i, std::vector<char>& used) {
  if (i == r.size()) return true;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (used[j] || length(r[i] - g[j]) > tol) continue;
    used[j] = 1;
    if (matching_oracle(r, g, tol, i + 1, used)) return true;
    used[j] = 0;
  }
  return false;
}

TEST(PatternGoal, MatchesExhaustiveOracle) {
  CounterRng rng(11);
  int positives = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const auto goals = goal_pattern(n);
    std::vector<Vec2> robots;
    for (int i = 0; i < n; ++i) {
      const Vec2& base = goals[rng.below(n)];
      robots.push_back(base + Vec2{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)});
    }
    std::vector<char> used(n, 0);
    const bool expected = matching_oracle(robots, goals, 0.15, 0, used);
    positives += expected;
    ASSERT_EQ(pattern_matched(robots, goals, 0.15), expected) << trial;
  }
  EXPECT_GT(positives, 50);
}

TEST(Matching, HungarianMatchesBruteForce) {
  CounterRng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto& row : cost) {
      for (double& c : row) c = rng.uniform(0, 10);
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double s = 0;
      for (int i = 0; i < n; ++i) s += cost[i][perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto a = min_cost_assignment(cost);
    double got = 0;
    std::set<int> cols;
    for (int i = 0; i < n; ++i) {
      got += cost[i][a[i]];
      cols.insert(a[i]);
    }
    EXPECT_EQ(static_cast<int>(cols.size()), n);
    EXPECT_NEAR(got, best, 1e-9);
  }
}

TaskState settled(TaskKind kind, const TaskMode& mode) {
  TaskState s = instantiate_task(kind, mode, 1);
  begin_simulation(s);
  return s;
}

int evaluations_until_complete(TaskState& s, int limit) {
  const std::vector<Vec2> zero(s.world.robots.size());
  for (int i = 1; i <= limit; ++i) {
    if (s.phase == Phase::kSimulation) step_task(s, zero);
    if (evaluate_task(s) == Evaluation::kComplete) return i;
  }
  return -1;
}

TEST(Evaluate, HexagonInsideRegionCompletesAfterDwell) {
  TaskState s = settled(TaskKind::kVaryVisualization, VaryVisualizationMode{});
  const auto& goal = std::get<RegionGoal>(s.goal);
  s.world.workpieces[0].position = sim::polygon_centroid(goal.region);
  s.world.robots.resize(1);
  EXPECT_EQ(evaluations_until_complete(s, 100), goal.dwell_steps);
  // Dwell-stable: re-evaluating the unchanged world stays complete.
  EXPECT_EQ(evaluate_task(s), Evaluation::kComplete);
  submit(s);
  EXPECT_EQ(s.phase, Phase::kSubmission);
}

TEST(Evaluate, HexagonStraddlingTheBoundaryKeepsRunning) {
  TaskState s = settled(TaskKind::kVaryVisualization, VaryVisualizationMode{});
  const auto& goal = std::get<RegionGoal>(s.goal);
  double min_x = 1e9;
  for (const Vec2& v : goal.region) min_x = std::min(min_x, v.x);
  s.world.workpieces[0].position = {min_x, sim::polygon_centroid(goal.region).y};
  s.world.robots.resize(1);
  EXPECT_EQ(evaluations_until_complete(s, 100), -1);
}

TEST(Evaluate, PatternWithRobotsOnGoalsCompletesOnDwellStep) {
  TaskState s = settled(TaskKind::kPositionControl, PositionControlMode{3});
  const auto& goal = std::get<PatternGoal>(s.goal);
  // Place robots on the goal points in reverse order.
  for (int i = 0; i < 3; ++i) s.world.robots[i].position = goal.points[2 - i];
  EXPECT_EQ(evaluations_until_complete(s, 100), goal.dwell_steps);
}

TEST(Evaluate, PyramidHonoursQuarterTurnSymmetry) {
  TaskState s = settled(TaskKind::kVaryControl, VaryControlMode{});
  const auto goal = std::get<PyramidGoal>(s.goal);
  auto place = [&](std::array<int, 3> order, double angle) {
    for (int i = 0; i < 3; ++i) {
      s.world.workpieces[i].position = goal.targets[order[i]].position;
      s.world.workpieces[i].rotation = sim::Rotation::from_angle(angle);
    }
  };
  place({0, 1, 2}, 0.0);
  EXPECT_TRUE(goal_satisfied(s.world, s.goal));
  place({1, 0, 2}, 3.14159265358979 / 2);
  EXPECT_TRUE(goal_satisfied(s.world, s.goal));
  place({2, 0, 1}, 0.15);
  EXPECT_TRUE(goal_satisfied(s.world, s.goal));
  place({0, 1, 2}, 0.2);
  EXPECT_FALSE(goal_satisfied(s.world, s.goal));
  place({0, 1, 2}, 0.0);
  s.world.workpieces[2].position += Vec2{0.11, 0.0};
  EXPECT_FALSE(goal_satisfied(s.world, s.goal));
}

TEST(Lifecycle, OnlyAllowedTransitions) {
  TaskState s = instantiate_task(TaskKind::kPositionControl, PositionControlMode{2}, 1);
  const std::vector<Vec2> zero(2);
  EXPECT_THROW(step_task(s, zero), std::logic_error);
  EXPECT_THROW(evaluate_task(s), std::logic_error);
  EXPECT_THROW(submit(s), std::logic_error);
  begin_simulation(s);
  EXPECT_THROW(begin_simulation(s), std::logic_error);
  EXPECT_THROW(evaluate_task(s), std::logic_error);
  step_task(s, zero);
  EXPECT_EQ(s.phase, Phase::kEvaluation);
  EXPECT_EQ(s.step, 1);
  EXPECT_THROW(step_task(s, zero), std::logic_error);
  EXPECT_EQ(evaluate_task(s), Evaluation::kRunning);
  EXPECT_EQ(s.phase, Phase::kSimulation);
  EXPECT_THROW(step_task(s, std::vector<Vec2>(3)), ConfigError);
  submit(s);
  EXPECT_THROW(begin_simulation(s), std::logic_error);
  EXPECT_THROW(submit(s), std::logic_error);
}

}  // namespace
}  // namespace swarm::tasks
