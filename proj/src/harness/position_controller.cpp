// Greedy pattern builder for global-input position control.
//
// Under a broadcast input the only way to change the swarm's shape is to
// stop one robot against something while the rest keep moving. A maneuver
// parks robot k on a face of the peg (or a wall), presses so that every
// other robot moves d further than k, and backs off. A weighted A* over
// these maneuvers picks the next one; the swarm is then driven there along
// a rigid-translation path planned on a grid. Once the shape matches the
// pattern up to translation the whole group is driven onto the goal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>

#include "swarm/error.hpp"
#include "swarm/harness/controller.hpp"
#include "swarm/tasks/matching.hpp"

namespace swarm::harness {

namespace {

constexpr double kMargin = 0.06;      // clearance kept from the peg and the walls
constexpr double kApproach = 0.25;    // gap to the blocker before a press
constexpr double kRetreat = 0.15;     // back-off after a press
constexpr double kShapeTol = 0.03;    // residual shape error accepted per axis
constexpr double kRestSpeed = 0.03;   // m/s, "at rest" for replanning
constexpr double kGrid = 0.05;        // translation planner resolution
constexpr int kSearchBudget = 4000;   // node expansions per plan
constexpr int kStallTicks = 240;

struct Box {
  Vec2 min;
  Vec2 max;
};

double box_distance(const Box& b, const Vec2& p) {
  const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
  const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
  return std::sqrt(dx * dx + dy * dy);
}

// Distance between an axis-aligned segment and a box.
double sweep_box_distance(const Vec2& a, const Vec2& b, const Box& box) {
  const Box s{{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
  const double dx = std::max({box.min.x - s.max.x, 0.0, s.min.x - box.max.x});
  const double dy = std::max({box.min.y - s.max.y, 0.0, s.min.y - box.max.y});
  return std::sqrt(dx * dx + dy * dy);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = length_squared(ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return length(p - (a + ab * t));
}

Vec2 axis_vector(int axis, int sign) { return axis == 0 ? Vec2{double(sign), 0.0} : Vec2{0.0, double(sign)}; }
double component(const Vec2& v, int axis) { return axis == 0 ? v.x : v.y; }

struct Geometry {
  Box arena;       // shrunk so robot centres stay clear of the walls
  Box arena_full;  // arena shrunk by the radius only
  std::optional<Box> peg;
  double radius = 0.15;
};

bool free_position(const Geometry& g, const Vec2& p, double margin) {
  if (p.x < g.arena_full.min.x + margin || p.x > g.arena_full.max.x - margin ||
      p.y < g.arena_full.min.y + margin || p.y > g.arena_full.max.y - margin) {
    return false;
  }
  return !g.peg || box_distance(*g.peg, p) >= g.radius + margin;
}

struct Maneuver {
  int k = 0;
  int axis = 0;
  int sign = 1;
  double d = 0.0;
  Vec2 pre;  // where robot k waits before the press
};

// Picks a blocker for (k, axis, sign, d) and checks that the press is
// collision free. Returns the maneuver with its approach point.
std::optional<Maneuver> realize(const Geometry& g, const std::vector<Vec2>& P, int k, int axis,
                                int sign, double d) {
  const Vec2 dir = axis_vector(axis, sign);
  const double r = g.radius;
  std::vector<Vec2> contacts;
  if (g.peg) {
    const Box& peg = *g.peg;
    const Vec2 c = (peg.min + peg.max) * 0.5;
    const double half = 0.5 * component(peg.max - peg.min, 1 - axis);
    for (double t : {0.0, 0.15, -0.15}) {
      if (std::abs(t) > half - 0.05) continue;
      Vec2 contact;
      if (axis == 0) {
        contact = {sign > 0 ? peg.min.x - r : peg.max.x + r, c.y + t};
      } else {
        contact = {c.x + t, sign > 0 ? peg.min.y - r : peg.max.y + r};
      }
      contacts.push_back(contact);
    }
  }
  {
    Vec2 contact = P[k];
    if (axis == 0) {
      contact.x = sign > 0 ? g.arena_full.max.x : g.arena_full.min.x;
    } else {
      contact.y = sign > 0 ? g.arena_full.max.y : g.arena_full.min.y;
    }
    contacts.push_back(contact);
  }

  for (const Vec2& contact : contacts) {
    const Vec2 pre = contact - dir * kApproach;
    const Vec2 shift = pre - P[k];
    bool ok = true;
    for (std::size_t j = 0; j < P.size() && ok; ++j) {
      const Vec2 q = P[j] + shift;
      if (static_cast<int>(j) == k) {
        ok = free_position(g, q, kMargin);
        continue;
      }
      const Vec2 end = q + dir * (kApproach + d);
      ok = free_position(g, q, kMargin) && free_position(g, end, kMargin) &&
           (!g.peg || sweep_box_distance(q, end, *g.peg) >= r + kMargin) &&
           point_segment_distance(contact, q, end) >= 2.0 * r + kMargin;
    }
    if (ok) return Maneuver{k, axis, sign, d, pre};
  }
  return std::nullopt;
}

std::vector<Vec2> apply_maneuver(const std::vector<Vec2>& P, const Maneuver& m) {
  const Vec2 dir = axis_vector(m.axis, m.sign);
  const Vec2 shift = m.pre - P[m.k];
  std::vector<Vec2> out(P.size());
  for (std::size_t j = 0; j < P.size(); ++j) {
    out[j] = P[j] + shift + dir * kApproach;
    if (static_cast<int>(j) != m.k) out[j] += dir * m.d;
    out[j] -= dir * kRetreat;
  }
  return out;
}

// Lower bound on remaining maneuvers: clusters of (p - g) per axis, minus one.
int clusters_minus_one(const std::vector<Vec2>& P, const std::vector<Vec2>& G) {
  int h = 0;
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> v;
    for (std::size_t i = 0; i < P.size(); ++i) v.push_back(component(P[i] - G[i], axis));
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] - v[i - 1] > kShapeTol) ++h;
    }
  }
  return h;
}

bool shape_done(const std::vector<Vec2>& P, const std::vector<Vec2>& G) {
  for (int axis = 0; axis < 2; ++axis) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < P.size(); ++i) {
      const double v = component(P[i] - G[i], axis);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > 2.0 * kShapeTol) return false;
  }
  return true;
}

std::string shape_key(const std::vector<Vec2>& P, const std::vector<Vec2>& G) {
  std::string key;
  const Vec2 ref = P[0] - G[0];
  for (std::size_t i = 1; i < P.size(); ++i) {
    const Vec2 e = (P[i] - G[i]) - ref;
    key += std::to_string(std::lround(e.x / 0.02)) + "," + std::to_string(std::lround(e.y / 0.02)) + ";";
  }
  return key;
}

// Weighted A* over maneuvers. Returns the first maneuver of the best plan,
// or nullopt when the shape already matches.
std::optional<Maneuver> plan_next(const Geometry& g, const std::vector<Vec2>& P0,
                                  const std::vector<Vec2>& G, CounterRng& rng,
                                  const std::vector<std::string>& banned) {
  if (shape_done(P0, G)) return std::nullopt;
  struct Node {
    std::vector<Vec2> P;
    double cost;
    int h;
    int parent;
    Maneuver m;
  };
  std::vector<Node> nodes;
  nodes.push_back(Node{P0, 0.0, clusters_minus_one(P0, G), -1, Maneuver{}});
  using Entry = std::tuple<double, double, int>;  // f, tie, index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({2.0 * nodes[0].h, 0.0, 0});
  std::unordered_map<std::string, double> best_cost;
  best_cost[shape_key(P0, G)] = 0.0;
  int best = -1;
  int best_partial = 0;
  const int n = static_cast<int>(P0.size());

  for (int expanded = 0; !open.empty() && expanded < kSearchBudget; ++expanded) {
    const int idx = std::get<2>(open.top());
    open.pop();
    if (shape_done(nodes[idx].P, G)) {
      best = idx;
      break;
    }
    const auto& bp = nodes[best_partial];
    if (nodes[idx].h < bp.h || (nodes[idx].h == bp.h && nodes[idx].cost < bp.cost)) best_partial = idx;

    const std::vector<Vec2> P = nodes[idx].P;
    const double base_cost = nodes[idx].cost;
    for (int k = 0; k < n; ++k) {
      for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> moves;
        for (int j = 0; j < n; ++j) {
          if (j == k) continue;
          const double delta = component((P[k] - G[k]) - (P[j] - G[j]), axis);
          if (std::abs(delta) > kShapeTol) moves.push_back(delta);
        }
        for (double step : {0.45, 0.9}) {
          moves.push_back(step);
          moves.push_back(-step);
        }
        std::sort(moves.begin(), moves.end());
        moves.erase(std::unique(moves.begin(), moves.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                    moves.end());
        for (double mv : moves) {
          const int sign = mv > 0 ? 1 : -1;
          auto m = realize(g, P, k, axis, sign, std::abs(mv));
          if (!m) continue;
          if (idx == 0) {
            const std::string tag = std::to_string(k) + ":" + std::to_string(axis) + ":" +
                                    std::to_string(sign) + ":" + std::to_string(std::lround(mv * 100));
            if (std::find(banned.begin(), banned.end(), tag) != banned.end()) continue;
          }
          auto child = apply_maneuver(P, *m);
          const std::string key = shape_key(child, G);
          const double travel = length(m->pre - P[k]) + std::abs(mv);
          const double cost = base_cost + 1.0 + 0.03 * travel;
          const auto it = best_cost.find(key);
          if (it != best_cost.end() && it->second <= cost) continue;
          best_cost[key] = cost;
          const int h = clusters_minus_one(child, G);
          nodes.push_back(Node{std::move(child), cost, h, idx, *m});
          open.push({cost + 2.0 * h, rng.next_unit(), static_cast<int>(nodes.size() - 1)});
        }
      }
    }
  }
  int target = best >= 0 ? best : best_partial;
  if (target == 0) {
    // Nothing better than where we are; take any feasible maneuver.
    if (nodes.size() > 1) target = 1;
    else return std::nullopt;
  }
  while (nodes[target].parent != 0) target = nodes[target].parent;
  return nodes[target].m;
}

// Grid A* in the space of rigid translations of the whole swarm.
std::optional<std::vector<Vec2>> plan_translation(const Geometry& g, const std::vector<Vec2>& P,
                                                  const Vec2& goal_shift) {
  double lo_x = -1e9, hi_x = 1e9, lo_y = -1e9, hi_y = 1e9;
  for (const Vec2& p : P) {
    lo_x = std::max(lo_x, g.arena_full.min.x + 0.5 * kMargin - p.x);
    hi_x = std::min(hi_x, g.arena_full.max.x - 0.5 * kMargin - p.x);
    lo_y = std::max(lo_y, g.arena_full.min.y + 0.5 * kMargin - p.y);
    hi_y = std::min(hi_y, g.arena_full.max.y - 0.5 * kMargin - p.y);
  }
  if (!(lo_x <= hi_x && lo_y <= hi_y)) return std::nullopt;
  const int nx = static_cast<int>((hi_x - lo_x) / kGrid) + 1;
  const int ny = static_cast<int>((hi_y - lo_y) / kGrid) + 1;
  auto cell_pos = [&](int i, int j) { return Vec2{lo_x + i * kGrid, lo_y + j * kGrid}; };
  std::vector<signed char> free_cache(static_cast<std::size_t>(nx) * ny, -1);
  auto is_free = [&](int i, int j) {
    signed char& c = free_cache[static_cast<std::size_t>(j) * nx + i];
    if (c < 0) {
      const Vec2 t = cell_pos(i, j);
      c = 1;
      if (g.peg) {
        for (const Vec2& p : P) {
          if (box_distance(*g.peg, p + t) < g.radius + 0.5 * kMargin) {
            c = 0;
            break;
          }
        }
      }
    }
    return c == 1;
  };
  auto snap = [&](const Vec2& t, int& i, int& j) {
    i = std::clamp(static_cast<int>(std::lround((t.x - lo_x) / kGrid)), 0, nx - 1);
    j = std::clamp(static_cast<int>(std::lround((t.y - lo_y) / kGrid)), 0, ny - 1);
  };
  int si, sj, gi, gj;
  snap({0.0, 0.0}, si, sj);
  snap(goal_shift, gi, gj);
  if (!is_free(gi, gj)) return std::nullopt;
  // Leave a blocked start cell by the nearest free one.
  if (!is_free(si, sj)) {
    bool found = false;
    for (int rad = 1; rad < 20 && !found; ++rad) {
      for (int dj = -rad; dj <= rad && !found; ++dj) {
        for (int di = -rad; di <= rad && !found; ++di) {
          const int i = si + di, j = sj + dj;
          if (i < 0 || j < 0 || i >= nx || j >= ny || !is_free(i, j)) continue;
          si = i;
          sj = j;
          found = true;
        }
      }
    }
    if (!found) return std::nullopt;
  }
  const std::size_t total = static_cast<std::size_t>(nx) * ny;
  std::vector<double> dist(total, std::numeric_limits<double>::infinity());
  std::vector<int> from(total, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const int start = sj * nx + si;
  const int target = gj * nx + gi;
  dist[start] = 0.0;
  auto heuristic = [&](int idx) {
    const int i = idx % nx, j = idx / nx;
    return std::hypot(double(i - gi), double(j - gj)) * kGrid;
  };
  open.push({heuristic(start), start});
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    if (idx == target) break;
    if (f - heuristic(idx) > dist[idx] + 1e-12) continue;
    const int i = idx % nx, j = idx / nx;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (!di && !dj) continue;
        const int a = i + di, b = j + dj;
        if (a < 0 || b < 0 || a >= nx || b >= ny || !is_free(a, b)) continue;
        // No corner cutting past a blocked cell.
        if (di && dj && (!is_free(i + di, j) || !is_free(i, j + dj))) continue;
        const int nidx = b * nx + a;
        const double nd = dist[idx] + ((di && dj) ? std::sqrt(2.0) : 1.0) * kGrid;
        if (nd < dist[nidx]) {
          dist[nidx] = nd;
          from[nidx] = idx;
          open.push({nd + heuristic(nidx), nidx});
        }
      }
    }
  }
  if (!std::isfinite(dist[target])) return std::nullopt;
  std::vector<int> cells;
  for (int idx = target; idx != -1; idx = from[idx]) cells.push_back(idx);
  std::reverse(cells.begin(), cells.end());
  // Keep only the corners of the 8-connected path.
  std::vector<Vec2> waypoints;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c > 0 && c + 1 < cells.size()) {
      const int d1 = cells[c] - cells[c - 1];
      const int d2 = cells[c + 1] - cells[c];
      if (d1 == d2) continue;
    }
    waypoints.push_back(cell_pos(cells[c] % nx, cells[c] / nx));
  }
  if (!waypoints.empty() && length(waypoints.front()) < 0.5 * kGrid) waypoints.erase(waypoints.begin());
  waypoints.push_back(goal_shift);
  return waypoints;
}

class PositionController final : public Controller {
 public:
  explicit PositionController(CounterRng rng) : rng_(rng) {}

  std::string name() const override { return "scripted:position"; }

  control::ControlIntent step(const observe::Observation& obs, const TaskView& view) override {
    const auto* fs = std::get_if<observe::FullStateView>(&obs);
    if (!fs) throw ConfigError("position controller needs full-state feedback");
    const auto* goal = view.goal ? std::get_if<tasks::PatternGoal>(view.goal) : nullptr;
    if (!goal) throw ConfigError("position controller needs a pattern goal");
    const auto& P = fs->positions;
    if (P.size() != goal->points.size()) throw ConfigError("robot and goal counts differ");

    if (!initialized_) init(view, P, *goal);
    velocities_.assign(P.size(), Vec2{});
    if (prev_.size() == P.size()) {
      for (std::size_t i = 0; i < P.size(); ++i) velocities_[i] = (P[i] - prev_[i]) / view.dt;
    }
    prev_ = P;
    damping_ = view.damping;
    double speed = 0.0;
    for (const Vec2& v : velocities_) speed = std::max(speed, length(v));
    at_rest_ = speed < kRestSpeed;

    control::ControlIntent intent;
    intent.key_direction = act(P, goal->points);
    return intent;
  }

 private:
  enum class Mode { kPlan, kMove, kPress, kRetreat, kHold };

  void init(const TaskView& view, const std::vector<Vec2>& P, const tasks::PatternGoal& goal) {
    initialized_ = true;
    geometry_.radius = view.robot_radius;
    geometry_.arena_full = {view.arena.min + Vec2{view.robot_radius, view.robot_radius},
                            view.arena.max - Vec2{view.robot_radius, view.robot_radius}};
    geometry_.arena = geometry_.arena_full;
    if (!view.obstacles.empty()) {
      Box b{view.obstacles[0].vertices[0], view.obstacles[0].vertices[0]};
      for (const Vec2& v : view.obstacles[0].vertices) {
        b.min = {std::min(b.min.x, v.x), std::min(b.min.y, v.y)};
        b.max = {std::max(b.max.x, v.x), std::max(b.max.y, v.y)};
      }
      geometry_.peg = b;
    }
    // Robot i heads for goal assign_[i]; min-sum of squared distances.
    const std::size_t n = P.size();
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) cost[i][j] = length_squared(P[i] - goal.points[j]);
    }
    assign_ = tasks::min_cost_assignment(cost);
    tolerance_ = goal.tolerance;
  }

  std::vector<Vec2> assigned_goals(const std::vector<Vec2>& goals) const {
    std::vector<Vec2> G(goals.size());
    for (std::size_t i = 0; i < goals.size(); ++i) G[i] = goals[assign_[i]];
    return G;
  }

  Vec2 act(const std::vector<Vec2>& P, const std::vector<Vec2>& goals) {
    ++ticks_in_mode_;
    switch (mode_) {
      case Mode::kPlan:
        if (!at_rest_) return {};
        plan(P, goals);
        return mode_ == Mode::kPlan ? Vec2{} : act(P, goals);
      case Mode::kMove:
        return follow(P);
      case Mode::kPress:
        return press(P);
      case Mode::kRetreat:
        return retreat(P);
      case Mode::kHold: {
        const auto G = assigned_goals(goals);
        bool ok = true;
        for (std::size_t i = 0; i < P.size(); ++i) ok = ok && length(P[i] - G[i]) <= 0.8 * tolerance_;
        if (!ok && at_rest_) enter(Mode::kPlan);
        return {};
      }
    }
    return {};
  }

  void enter(Mode m) {
    mode_ = m;
    ticks_in_mode_ = 0;
    released_ = false;
  }

  void plan(const std::vector<Vec2>& P, const std::vector<Vec2>& goals) {
    const auto G = assigned_goals(goals);
    for (int attempt = 0; attempt < 8; ++attempt) {
      const auto m = plan_next(geometry_, P, G, rng_, banned_);
      if (!m) {
        // Shape matches: drive the group onto the pattern.
        Vec2 shift;
        for (std::size_t i = 0; i < P.size(); ++i) shift += G[i] - P[i];
        shift = shift / static_cast<double>(P.size());
        if (start_move(P, 0, P[0] + shift)) {
          after_move_ = Mode::kHold;
          return;
        }
        return;
      }
      if (start_move(P, m->k, m->pre)) {
        maneuver_ = *m;
        after_move_ = Mode::kPress;
        banned_.clear();
        return;
      }
      banned_.push_back(std::to_string(m->k) + ":" + std::to_string(m->axis) + ":" +
                        std::to_string(m->sign) + ":" +
                        std::to_string(std::lround(m->sign * m->d * 100)));
    }
  }

  bool start_move(const std::vector<Vec2>& P, int ref, const Vec2& target) {
    auto path = plan_translation(geometry_, P, target - P[ref]);
    if (!path) return false;
    waypoints_.clear();
    for (const Vec2& t : *path) waypoints_.push_back(P[ref] + t);
    next_waypoint_ = 0;
    ref_ = ref;
    best_error_ = std::numeric_limits<double>::infinity();
    enter(Mode::kMove);
    return true;
  }

  Vec2 predicted(const std::vector<Vec2>& P, int i) const { return P[i] + velocities_[i] / damping_; }

  Vec2 follow(const std::vector<Vec2>& P) {
    const Vec2 p = P[ref_];
    const Vec2 ahead = predicted(P, ref_);
    while (next_waypoint_ + 1 < waypoints_.size() && length(waypoints_[next_waypoint_] - ahead) < 0.08) {
      ++next_waypoint_;
    }
    const bool last = next_waypoint_ + 1 == waypoints_.size();
    const Vec2 w = waypoints_[next_waypoint_];
    const double err = length(w - p);
    if (err + 1e-3 < best_error_) {
      best_error_ = err;
      ticks_in_mode_ = 0;
    } else if (ticks_in_mode_ > kStallTicks) {
      enter(Mode::kPlan);
      return {};
    }
    if (last) {
      const double lead = length(w - ahead);
      if (err <= 0.02 && at_rest_) {
        press_start_ = 0.0;
        enter(after_move_);
        if (mode_ == Mode::kPress) press_start_ = relative(P);
        return {};
      }
      if (lead <= 0.012) return {};
    }
    return quantize_direction(w - ahead);
  }

  double relative(const std::vector<Vec2>& P) const {
    Vec2 others;
    for (std::size_t j = 0; j < P.size(); ++j) {
      if (static_cast<int>(j) != maneuver_.k) others += P[j];
    }
    others = others / static_cast<double>(P.size() - 1);
    return component(P[maneuver_.k] - others, maneuver_.axis);
  }

  Vec2 press(const std::vector<Vec2>& P) {
    const Vec2 dir = axis_vector(maneuver_.axis, maneuver_.sign);
    // Others move by d relative to k: relative() drops by sign * d.
    const double target = press_start_ - maneuver_.sign * maneuver_.d;
    const double remaining = maneuver_.sign * (relative(P) - target);
    double coast = 0.0;
    for (std::size_t j = 0; j < P.size(); ++j) {
      if (static_cast<int>(j) == maneuver_.k) continue;
      coast += dot(velocities_[j], dir) / damping_;
    }
    coast /= static_cast<double>(P.size() - 1);
    if (ticks_in_mode_ > 20 * kStallTicks) {
      enter(Mode::kPlan);
      return {};
    }
    if (remaining - coast > 0.01) return dir;
    if (at_rest_) {
      retreat_from_ = P[maneuver_.k];
      enter(Mode::kRetreat);
    }
    return {};
  }

  Vec2 retreat(const std::vector<Vec2>& P) {
    const Vec2 dir = axis_vector(maneuver_.axis, -maneuver_.sign);
    const double moved = dot(predicted(P, maneuver_.k) - retreat_from_, dir);
    if (moved < kRetreat && !released_) return dir;
    released_ = true;
    if (at_rest_) enter(Mode::kPlan);
    return {};
  }

  CounterRng rng_;
  bool initialized_ = false;
  Geometry geometry_;
  std::vector<int> assign_;
  double tolerance_ = 0.15;
  std::vector<Vec2> prev_;
  std::vector<Vec2> velocities_;
  double damping_ = 10.0;
  bool at_rest_ = true;

  Mode mode_ = Mode::kPlan;
  Mode after_move_ = Mode::kHold;
  long ticks_in_mode_ = 0;
  bool released_ = false;
  std::vector<Vec2> waypoints_;
  std::size_t next_waypoint_ = 0;
  int ref_ = 0;
  double best_error_ = 0.0;
  Maneuver maneuver_;
  double press_start_ = 0.0;
  Vec2 retreat_from_;
  std::vector<std::string> banned_;
};

}  // namespace

std::unique_ptr<Controller> make_position_controller(CounterRng rng) {
  return std::make_unique<PositionController>(rng);
}

}  // namespace swarm::harness
