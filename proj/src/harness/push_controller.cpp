#include <algorithm>
#include <cmath>

#include "swarm/harness/controller.hpp"

namespace swarm::harness {

namespace {

bool inside_convex(const std::vector<Vec2>& region, const Vec2& p) {
  for (std::size_t i = 0; i < region.size(); ++i) {
    const Vec2& a = region[i];
    const Vec2& b = region[(i + 1) % region.size()];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

// Rough swarm radius from whatever the observation offers.
double swarm_spread(const observe::Observation& obs, const Vec2& center) {
  using namespace observe;
  if (const auto* fs = std::get_if<FullStateView>(&obs)) {
    const Cov2 c = swarm_covariance(fs->positions, center);
    return std::sqrt(c.xx + c.yy) + fs->radius;
  }
  if (const auto* mv = std::get_if<MeanVarianceView>(&obs)) {
    return std::sqrt(mv->covariance.xx + mv->covariance.yy);
  }
  if (const auto* h = std::get_if<HullView>(&obs)) {
    double r = 0.0;
    for (const Vec2& v : h->vertices) r = std::max(r, length(v - center));
    // A filled disc of radius R has rms radius R / sqrt(2).
    return r / std::sqrt(2.0);
  }
  return 1.0;
}

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = length_squared(ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return length(p - (a + ab * t));
}

}  // namespace

Vec2 quantize_direction(const Vec2& v) {
  constexpr double kTan22_5 = 0.41421356237309503;
  const double ax = std::abs(v.x);
  const double ay = std::abs(v.y);
  if (ax == 0.0 && ay == 0.0) return {};
  const double kx = ax > kTan22_5 * ay ? (v.x > 0 ? 1.0 : -1.0) : 0.0;
  const double ky = ay > kTan22_5 * ax ? (v.y > 0 ? 1.0 : -1.0) : 0.0;
  return {kx, ky};
}

Vec2 PushController::desired_direction(const observe::Observation& obs, const TaskView& view) {
  const auto* goal = view.goal ? std::get_if<tasks::RegionGoal>(view.goal) : nullptr;
  if (!goal || goal->workpieces.empty() || view.workpieces.empty()) return {};
  const int id = goal->workpieces.front();
  const auto it = std::find_if(view.workpieces.begin(), view.workpieces.end(),
                               [id](const sim::Workpiece& w) { return w.id == id; });
  if (it == view.workpieces.end()) return {};
  const sim::Workpiece& object = *it;

  const auto vertices = object.world_vertices();
  if (std::all_of(vertices.begin(), vertices.end(),
                  [&](const Vec2& v) { return inside_convex(goal->region, v); })) {
    return {};
  }

  const Vec2 c_obj = object.position;
  const Vec2 c_goal = sim::polygon_centroid(goal->region);
  double r_obj = 0.0;
  for (const Vec2& v : object.local_vertices) r_obj = std::max(r_obj, length(v));

  const Vec2 mean = observe::observed_center(obs);
  const double spread = swarm_spread(obs, mean);
  const double d = r_obj + spread + params_.standoff_margin;
  const Vec2 away = normalize_or_zero(c_obj - c_goal);
  const Vec2 staging = c_obj + away * d;
  const double dist = length(mean - staging);

  if (phase_ == 1 && dist < 0.5 * d) phase_ = 2;
  if (phase_ == 2 && dist > 1.5 * d) phase_ = 1;

  if (phase_ == 2) {
    return normalize_or_zero(c_obj - mean) + normalize_or_zero(c_goal - c_obj);
  }
  // Go around the object rather than through it.
  if (distance_to_segment(c_obj, mean, staging) < r_obj + 0.8 * spread &&
      dot(mean - c_obj, away) < r_obj) {
    const Vec2 side_axis = perp(away);
    const double side = dot(mean - c_obj, side_axis) >= 0.0 ? 1.0 : -1.0;
    const Vec2 waypoint = c_obj + side_axis * (side * d) + away * r_obj;
    return waypoint - mean;
  }
  return staging - mean;
}

control::ControlIntent PushController::step(const observe::Observation& obs, const TaskView& view) {
  const Vec2 desired = desired_direction(obs, view);
  Vec2 key = quantize_direction(desired);
  // Changing the key restarts the force ramp, so hold on to the current key
  // while it is still roughly right.
  if (key != last_key_ && key != Vec2{} && last_key_ != Vec2{}) {
    const double c = dot(normalize_or_zero(desired), normalize_or_zero(last_key_));
    if (c > params_.keep_angle_cos) key = last_key_;
  }
  last_key_ = key;

  control::ControlIntent intent;
  if (view.scheme == control::ControlScheme::kGlobalForce) {
    intent.key_direction = key;
    return intent;
  }
  if (key == Vec2{}) return intent;
  const Vec2 mean = observe::observed_center(obs);
  const Vec2 dir = normalize_or_zero(key);
  const double reach = 10.0;
  intent.pointer = view.scheme == control::ControlScheme::kAttractivePoint ? mean + dir * reach
                                                                           : mean - dir * reach;
  intent.pointer_engaged = true;
  return intent;
}

}  // namespace swarm::harness
