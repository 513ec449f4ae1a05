#include "swarm/tasks/tasks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "swarm/error.hpp"
#include "swarm/sim/step.hpp"
#include "swarm/tasks/matching.hpp"

namespace swarm::tasks {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string_view section_of(TaskKind kind) { return to_string(kind); }

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("not a number: " + std::string(s));
  }
  return v;
}

struct Rect {
  Vec2 min;
  Vec2 max;
};

Rect rect_from(const std::vector<double>& v, std::string_view what) {
  if (v.size() != 4 || !(v[0] < v[2]) || !(v[1] < v[3])) {
    throw ConfigError(std::string(what) + " must be min_x min_y max_x max_y");
  }
  return {{v[0], v[1]}, {v[2], v[3]}};
}

std::vector<Vec2> polygon_from(const std::vector<double>& v, std::string_view what) {
  if (v.size() < 6 || v.size() % 2 != 0) {
    throw ConfigError(std::string(what) + " needs at least three x y pairs");
  }
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back({v[i], v[i + 1]});
  if (!sim::is_convex_ccw(out)) throw ConfigError(std::string(what) + " must be convex and counter-clockwise");
  return out;
}

std::vector<int> integers_from(const std::vector<double>& v, std::string_view what) {
  std::vector<int> out;
  for (double x : v) {
    if (x != std::floor(x) || x < 0 || x > 1e6) throw ConfigError(std::string(what) + " must be non-negative integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

sim::WorldParams world_params(const ScenarioDocument& doc) {
  sim::WorldParams p;
  p.dt = doc.number("world", "dt");
  p.damping = doc.number("world", "damping");
  p.workpiece_damping = doc.number("world", "workpiece_damping");
  p.solver_iterations = doc.integer("world", "solver_iterations");
  p.position_correction = doc.number("world", "position_correction");
  p.penetration_tolerance = doc.number("world", "penetration_tolerance");
  p.friction = doc.number("world", "friction");
  return p;
}

// Hexagonal lattice anchored at the pocket centre; the n sites closest to
// the centre are used, then jittered.
std::vector<Vec2> start_lattice(const Rect& pocket, int n, double radius, double gap,
                                double jitter, CounterRng& rng) {
  const Vec2 lo = pocket.min + Vec2{radius, radius};
  const Vec2 hi = pocket.max - Vec2{radius, radius};
  if (!(lo.x <= hi.x) || !(lo.y <= hi.y)) throw ConfigError("start pocket smaller than a robot");
  const Vec2 centre = (pocket.min + pocket.max) * 0.5;
  const double sx = 2.0 * radius + gap;
  const double sy = sx * std::sqrt(3.0) / 2.0;
  const int nx = static_cast<int>((hi.x - lo.x) / sx) + 2;
  const int ny = static_cast<int>((hi.y - lo.y) / sy) + 2;
  struct Site {
    Vec2 p;
    double d2;
  };
  std::vector<Site> sites;
  for (int j = -ny; j <= ny; ++j) {
    for (int i = -nx; i <= nx; ++i) {
      const Vec2 p = centre + Vec2{(i + (j & 1 ? 0.5 : 0.0)) * sx, j * sy};
      if (p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y) continue;
      sites.push_back({p, length_squared(p - centre)});
    }
  }
  if (static_cast<int>(sites.size()) < n) {
    throw ConfigError("start pocket holds " + std::to_string(sites.size()) + " robots, need " +
                      std::to_string(n));
  }
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    if (a.p.y != b.p.y) return a.p.y < b.p.y;
    return a.p.x < b.p.x;
  });
  std::vector<Vec2> out;
  for (int k = 0; k < n; ++k) {
    Vec2 p = sites[k].p;
    const double jx = rng.uniform(-jitter, jitter);
    const double jy = rng.uniform(-jitter, jitter);
    p += Vec2{jx, jy};
    p.x = std::clamp(p.x, lo.x, hi.x);
    p.y = std::clamp(p.y, lo.y, hi.y);
    out.push_back(p);
  }
  return out;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool inside_convex(const std::vector<Vec2>& region, const Vec2& p) {
  for (std::size_t i = 0; i < region.size(); ++i) {
    const Vec2& a = region[i];
    const Vec2& b = region[(i + 1) % region.size()];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

bool pose_matches(const sim::Workpiece& block, const sim::Pose& target, double pos_tol,
                  double cos_tol) {
  if (length_squared(block.position - target.position) > pos_tol * pos_tol) return false;
  const sim::Rotation t = sim::Rotation::from_angle(target.angle);
  const double c = block.rotation.c * t.c + block.rotation.s * t.s;
  const double s = block.rotation.s * t.c - block.rotation.c * t.s;
  // Squares look the same every quarter turn.
  return std::max(std::abs(c), std::abs(s)) >= cos_tol;
}

bool pyramid_satisfied(const sim::World& world, const PyramidGoal& goal) {
  const std::size_t n = goal.targets.size();
  if (world.workpieces.size() != n) return false;
  const double cos_tol = std::cos(goal.angle_tolerance);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      adj[i][j] = pose_matches(world.workpieces[i], goal.targets[j], goal.position_tolerance, cos_tol);
    }
  }
  const auto m = max_bipartite_matching(adj);
  return std::all_of(m.begin(), m.end(), [](int v) { return v >= 0; });
}

void require_phase(const TaskState& state, std::initializer_list<Phase> allowed, const char* op) {
  for (Phase p : allowed) {
    if (state.phase == p) return;
  }
  throw std::logic_error(std::string(op) + ": not allowed in the current phase");
}

}  // namespace

TaskKind kind_of(const TaskMode& mode) { return static_cast<TaskKind>(mode.index()); }

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kVaryNumber: return "vary_number";
    case TaskKind::kVaryControl: return "vary_control";
    case TaskKind::kVaryVisualization: return "vary_visualization";
    case TaskKind::kVaryNoise: return "vary_noise";
    case TaskKind::kPositionControl: return "position_control";
  }
  return "unknown";
}

TaskKind task_kind_from_string(std::string_view name) {
  for (TaskKind k : kAllTaskKinds) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown task: " + std::string(name));
}

std::string_view to_string(control::ControlScheme scheme) {
  switch (scheme) {
    case control::ControlScheme::kGlobalForce: return "global";
    case control::ControlScheme::kAttractivePoint: return "attractive";
    case control::ControlScheme::kRepulsivePoint: return "repulsive";
  }
  return "unknown";
}

control::ControlScheme control_scheme_from_string(std::string_view name) {
  for (auto s : {control::ControlScheme::kGlobalForce, control::ControlScheme::kAttractivePoint,
                 control::ControlScheme::kRepulsivePoint}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown control scheme: " + std::string(name));
}

std::string mode_label(const TaskMode& mode) {
  return std::visit(
      Overloaded{
          [](const VaryNumberMode& m) { return "n=" + std::to_string(m.robots); },
          [](const VaryControlMode& m) { return "scheme=" + std::string(to_string(m.scheme)); },
          [](const VaryVisualizationMode& m) {
            return "obs=" + std::string(observe::to_string(m.observation));
          },
          [](const VaryNoiseMode& m) { return "noise=" + format_number(m.noise); },
          [](const PositionControlMode& m) { return "n=" + std::to_string(m.robots); },
      },
      mode);
}

TaskMode parse_mode(TaskKind kind, std::string_view label, const ScenarioDocument& doc) {
  const auto eq = label.find('=');
  if (eq == std::string_view::npos) throw ConfigError("mode must look like key=value: " + std::string(label));
  const std::string_view key = label.substr(0, eq);
  const std::string_view value = label.substr(eq + 1);
  std::optional<TaskMode> mode;
  switch (kind) {
    case TaskKind::kVaryNumber:
    case TaskKind::kPositionControl: {
      if (key != "n") break;
      const double n = parse_double(value);
      if (n != std::floor(n) || n < 0 || n > 1e6) throw ConfigError("robot count must be an integer");
      if (kind == TaskKind::kVaryNumber) {
        mode = VaryNumberMode{static_cast<int>(n)};
      } else {
        mode = PositionControlMode{static_cast<int>(n)};
      }
      break;
    }
    case TaskKind::kVaryControl:
      if (key == "scheme") mode = VaryControlMode{control_scheme_from_string(value)};
      break;
    case TaskKind::kVaryVisualization:
      if (key == "obs") mode = VaryVisualizationMode{observe::observation_mode_from_string(value)};
      break;
    case TaskKind::kVaryNoise:
      if (key == "noise") mode = VaryNoiseMode{parse_double(value)};
      break;
  }
  if (!mode) {
    throw ConfigError("mode " + std::string(label) + " does not belong to " + std::string(to_string(kind)));
  }
  const auto set = mode_set(kind, doc);
  if (std::find(set.begin(), set.end(), *mode) == set.end()) {
    throw ConfigError("mode " + std::string(label) + " is not in the mode set of " +
                      std::string(to_string(kind)));
  }
  return *mode;
}

std::vector<TaskMode> mode_set(TaskKind kind, const ScenarioDocument& doc) {
  std::vector<TaskMode> out;
  switch (kind) {
    case TaskKind::kVaryNumber:
      for (int n : integers_from(doc.numbers("vary_number", "counts"), "vary_number counts")) {
        out.push_back(VaryNumberMode{n});
      }
      break;
    case TaskKind::kVaryControl:
      for (auto s : {control::ControlScheme::kGlobalForce, control::ControlScheme::kAttractivePoint,
                     control::ControlScheme::kRepulsivePoint}) {
        out.push_back(VaryControlMode{s});
      }
      break;
    case TaskKind::kVaryVisualization:
      for (auto m : {observe::ObservationMode::kFullState, observe::ObservationMode::kConvexHull,
                     observe::ObservationMode::kMean, observe::ObservationMode::kMeanVariance}) {
        out.push_back(VaryVisualizationMode{m});
      }
      break;
    case TaskKind::kVaryNoise:
      for (double m : doc.numbers("vary_noise", "levels")) {
        if (!(m >= 0.0 && m <= 2.0)) throw ConfigError("noise levels must lie in [0, 2]");
        out.push_back(VaryNoiseMode{m});
      }
      break;
    case TaskKind::kPositionControl:
      for (int n : integers_from(doc.numbers("position_control", "counts"), "position_control counts")) {
        out.push_back(PositionControlMode{n});
      }
      break;
  }
  if (out.empty()) throw ConfigError("empty mode set for " + std::string(to_string(kind)));
  return out;
}

TaskMode sample_mode(TaskKind kind, CounterRng& rng, const ScenarioDocument& doc) {
  const auto set = mode_set(kind, doc);
  return set[rng.below(set.size())];
}

std::vector<std::pair<int, int>> pattern_cells(int n, const ScenarioDocument& doc) {
  const auto raw = integers_from(doc.numbers("position_control", "pattern_cells"), "pattern_cells");
  if (raw.size() % 2 != 0) throw ConfigError("pattern_cells needs column row pairs");
  const int total = static_cast<int>(raw.size() / 2);
  if (n < 1 || n > total) {
    throw ConfigError("goal pattern size must be in 1.." + std::to_string(total));
  }
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i) cells.push_back({raw[2 * i], raw[2 * i + 1]});
  return cells;
}

std::vector<Vec2> goal_pattern(int n, const ScenarioDocument& doc) {
  const auto origin = doc.numbers("position_control", "pattern_origin");
  if (origin.size() != 2) throw ConfigError("pattern_origin needs x y");
  const double spacing = doc.number("position_control", "pattern_spacing");
  std::vector<Vec2> out;
  for (auto [c, r] : pattern_cells(n, doc)) {
    out.push_back({origin[0] + c * spacing, origin[1] + r * spacing});
  }
  return out;
}

bool cells_enclose_void(std::span<const std::pair<int, int>> cells) {
  if (cells.empty()) return false;
  int min_c = cells[0].first, max_c = min_c, min_r = cells[0].second, max_r = min_r;
  for (auto [c, r] : cells) {
    min_c = std::min(min_c, c);
    max_c = std::max(max_c, c);
    min_r = std::min(min_r, r);
    max_r = std::max(max_r, r);
  }
  // One cell of padding so the outside is a single connected region.
  const int w = max_c - min_c + 3;
  const int h = max_r - min_r + 3;
  std::vector<char> grid(static_cast<std::size_t>(w * h), 0);
  for (auto [c, r] : cells) grid[(r - min_r + 1) * w + (c - min_c + 1)] = 1;
  std::vector<char> outside(grid.size(), 0);
  std::vector<int> stack = {0};
  outside[0] = 1;
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int x = idx % w, y = idx / w;
    const int nbr[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
    for (auto& q : nbr) {
      if (q[0] < 0 || q[0] >= w || q[1] < 0 || q[1] >= h) continue;
      const int j = q[1] * w + q[0];
      if (grid[j] || outside[j]) continue;
      outside[j] = 1;
      stack.push_back(j);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i] && !outside[i]) return true;
  }
  return false;
}

TaskState instantiate_task(TaskKind kind, const TaskMode& mode, std::uint64_t seed,
                           const ScenarioDocument& doc) {
  if (kind_of(mode) != kind) {
    throw ConfigError("mode " + mode_label(mode) + " does not belong to " + std::string(to_string(kind)));
  }
  {
    const auto set = mode_set(kind, doc);
    if (std::find(set.begin(), set.end(), mode) == set.end()) {
      throw ConfigError("mode " + mode_label(mode) + " is not in the mode set of " +
                        std::string(to_string(kind)));
    }
  }

  TaskState state;
  state.kind = kind;
  state.mode = mode;
  state.scenario_digest = doc.digest();

  sim::World& world = state.world;
  world.params = world_params(doc);
  const Rect arena = rect_from(doc.numbers("world", "arena"), "[world] arena");
  world.arena = {arena.min, arena.max};

  TaskSettings& settings = state.settings;
  settings.control.u_max = doc.number("world", "u_max");
  settings.control.ramp_time = doc.number("world", "ramp_time");
  settings.control.attract_epsilon = doc.number("world", "attract_epsilon");
  settings.ellipse_k = doc.number("world", "ellipse_k");
  settings.max_steps = doc.integer("world", "max_steps");
  const int dwell = doc.integer("world", "dwell_steps");
  if (dwell < 1) throw ConfigError("dwell_steps must be at least 1");

  double radius = doc.number("world", "robot_radius");
  double mass = doc.number("world", "robot_mass");
  double lattice_gap = doc.number("world", "lattice_gap");
  const double jitter = doc.number("world", "start_jitter");

  // Vary noise runs on another task's course.
  std::string course(section_of(kind));
  if (kind == TaskKind::kVaryNoise) course = doc.word("vary_noise", "course");

  int robots = 0;
  std::visit(Overloaded{
                 [&](const VaryNumberMode& m) {
                   robots = m.robots;
                   // Hold total area, total force and top speed constant.
                   const double ratio = doc.number("vary_number", "reference_count") / m.robots;
                   radius *= std::sqrt(ratio);
                   mass *= ratio;
                   settings.control.u_max *= ratio;
                 },
                 [&](const VaryControlMode& m) {
                   robots = doc.integer(course, "robots");
                   settings.scheme = m.scheme;
                 },
                 [&](const VaryVisualizationMode& m) {
                   robots = doc.integer(course, "robots");
                   settings.observation = m.observation;
                 },
                 [&](const VaryNoiseMode& m) {
                   robots = doc.integer(course, "robots");
                   settings.noise.max_fraction = m.noise;
                 },
                 [&](const PositionControlMode& m) { robots = m.robots; },
             },
             mode);
  if (robots < 1) throw ConfigError("task needs at least one robot");
  if (doc.has(course, "lattice_gap")) lattice_gap = doc.number(course, "lattice_gap");
  settings.control.attract_epsilon = std::max(settings.control.attract_epsilon, 2.0 * radius);

  CounterRng layout = CounterRng(seed).split("layout");
  const Rect pocket = rect_from(doc.numbers(course, "pocket"), "pocket");
  const auto starts = start_lattice(pocket, robots, radius, lattice_gap * radius, jitter * radius, layout);
  for (int i = 0; i < robots; ++i) {
    sim::RobotBody body;
    body.id = i;
    body.position = starts[i];
    body.radius = radius;
    body.mass = mass;
    world.robots.push_back(body);
  }

  for (const auto& v : doc.all_numbers(course, "obstacle")) {
    world.obstacles.push_back({polygon_from(v, "obstacle")});
  }
  const auto outlines = doc.all_numbers(course, "workpiece");
  if (!outlines.empty()) {
    const double density = doc.number(course, "workpiece_density");
    int id = 0;
    for (const auto& v : outlines) {
      world.workpieces.push_back(sim::make_workpiece(id++, polygon_from(v, "workpiece"), 0.0, density));
    }
  }

  switch (kind) {
    case TaskKind::kVaryNumber:
    case TaskKind::kVaryVisualization:
    case TaskKind::kVaryNoise: {
      RegionGoal g;
      g.region = polygon_from(doc.numbers(course, "goal_region"), "goal_region");
      for (const auto& w : world.workpieces) g.workpieces.push_back(w.id);
      g.dwell_steps = dwell;
      state.goal = g;
      break;
    }
    case TaskKind::kVaryControl: {
      PyramidGoal g;
      for (const auto& t : doc.all_numbers(course, "target")) {
        if (t.size() != 3) throw ConfigError("target needs x y angle");
        g.targets.push_back({{t[0], t[1]}, t[2]});
      }
      if (g.targets.size() != world.workpieces.size()) {
        throw ConfigError("vary_control needs one target per block");
      }
      g.position_tolerance = doc.number(course, "position_tolerance");
      g.angle_tolerance = doc.number(course, "angle_tolerance_deg") * kPi / 180.0;
      g.dwell_steps = dwell;
      state.goal = g;
      break;
    }
    case TaskKind::kPositionControl: {
      PatternGoal g;
      g.points = goal_pattern(robots, doc);
      g.tolerance = doc.number(course, "pattern_tolerance");
      g.dwell_steps = dwell;
      state.goal = g;
      break;
    }
  }

  sim::validate_world(world);
  return state;
}

bool pattern_matched(std::span<const Vec2> robots, std::span<const Vec2> goals, double tol) {
  if (robots.size() != goals.size()) return false;
  const double tol2 = tol * tol;
  std::vector<std::vector<bool>> adj(robots.size(), std::vector<bool>(goals.size(), false));
  for (std::size_t i = 0; i < robots.size(); ++i) {
    for (std::size_t j = 0; j < goals.size(); ++j) {
      adj[i][j] = length_squared(robots[i] - goals[j]) <= tol2;
    }
  }
  const auto m = max_bipartite_matching(adj);
  return std::all_of(m.begin(), m.end(), [](int v) { return v >= 0; });
}

bool goal_satisfied(const sim::World& world, const GoalSpec& goal) {
  return std::visit(
      Overloaded{
          [&](const RegionGoal& g) {
            for (int id : g.workpieces) {
              const auto it = std::find_if(world.workpieces.begin(), world.workpieces.end(),
                                           [id](const sim::Workpiece& w) { return w.id == id; });
              if (it == world.workpieces.end()) return false;
              for (const Vec2& v : it->world_vertices()) {
                if (!inside_convex(g.region, v)) return false;
              }
            }
            return true;
          },
          [&](const PyramidGoal& g) { return pyramid_satisfied(world, g); },
          [&](const PatternGoal& g) {
            std::vector<Vec2> positions;
            for (const auto& r : world.robots) positions.push_back(r.position);
            return pattern_matched(positions, g.points, g.tolerance);
          },
      },
      goal);
}

int dwell_steps(const GoalSpec& goal) {
  return std::visit([](const auto& g) { return g.dwell_steps; }, goal);
}

void begin_simulation(TaskState& state) {
  require_phase(state, {Phase::kInstantiation, Phase::kEvaluation}, "begin_simulation");
  state.phase = Phase::kSimulation;
}

void step_task(TaskState& state, std::span<const Vec2> robot_forces) {
  require_phase(state, {Phase::kSimulation}, "step_task");
  const std::vector<Vec2> none(state.world.workpieces.size());
  sim::step_world_in_place(state.world, robot_forces, none);
  ++state.step;
  state.phase = Phase::kEvaluation;
}

Evaluation evaluate_task(TaskState& state) {
  require_phase(state, {Phase::kEvaluation}, "evaluate_task");
  if (goal_satisfied(state.world, state.goal)) {
    ++state.satisfied_streak;
  } else {
    state.satisfied_streak = 0;
  }
  if (state.satisfied_streak >= dwell_steps(state.goal)) return Evaluation::kComplete;
  state.phase = Phase::kSimulation;
  return Evaluation::kRunning;
}

void submit(TaskState& state) {
  require_phase(state, {Phase::kSimulation, Phase::kEvaluation}, "submit");
  state.phase = Phase::kSubmission;
}

}  // namespace swarm::tasks
