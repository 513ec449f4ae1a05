#include "swarm/observe/observe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarm/error.hpp"
#include "swarm/observe/predicates.hpp"

namespace swarm::observe {

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  if (points.empty()) throw ConfigError("convex_hull needs at least one point");
  std::vector<Vec2> p(points.begin(), points.end());
  auto less = [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  };
  std::sort(p.begin(), p.end(), less);
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() <= 2) return p;

  // Andrew's monotone chain; a non-left turn pops, so collinear points go.
  std::vector<Vec2> hull(2 * p.size());
  std::size_t k = 0;
  for (const Vec2& q : p) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], q) <= 0) --k;
    hull[k++] = q;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    while (k >= lower && orient2d(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return hull;
}

Vec2 swarm_mean(std::span<const Vec2> points) {
  if (points.empty()) throw ConfigError("swarm_mean needs at least one point");
  Vec2 sum;
  for (const Vec2& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

Cov2 swarm_covariance(std::span<const Vec2> points, const Vec2& mean) {
  Cov2 c;
  if (points.empty()) return c;
  for (const Vec2& p : points) {
    const Vec2 d = p - mean;
    c.xx += d.x * d.x;
    c.xy += d.x * d.y;
    c.yy += d.y * d.y;
  }
  const double n = static_cast<double>(points.size());
  c.xx /= n;
  c.xy /= n;
  c.yy /= n;
  return c;
}

Ellipse confidence_ellipse(const Vec2& mean, const Cov2& cov, double k) {
  const double half_trace = 0.5 * (cov.xx + cov.yy);
  const double half_diff = 0.5 * (cov.xx - cov.yy);
  const double radius = std::hypot(half_diff, cov.xy);
  const double major = half_trace + radius;
  const double minor = std::max(0.0, half_trace - radius);
  Ellipse e;
  e.center = mean;
  e.semi_major = k * std::sqrt(std::max(0.0, major));
  e.semi_minor = k * std::sqrt(minor);
  double theta = 0.5 * std::atan2(2.0 * cov.xy, cov.xx - cov.yy);
  if (theta <= -M_PI / 2) theta += M_PI;
  e.orientation = theta;
  return e;
}

Observation make_observation(ObservationMode mode, std::span<const Vec2> positions,
                             double radius, double ellipse_k) {
  if (positions.empty()) throw ConfigError("cannot observe an empty swarm");
  switch (mode) {
    case ObservationMode::kFullState:
      return FullStateView{{positions.begin(), positions.end()}, radius};
    case ObservationMode::kConvexHull:
      return HullView{convex_hull(positions)};
    case ObservationMode::kMean:
      return MeanView{swarm_mean(positions)};
    case ObservationMode::kMeanVariance: {
      const Vec2 mean = swarm_mean(positions);
      const Cov2 cov = swarm_covariance(positions, mean);
      return MeanVarianceView{mean, cov, confidence_ellipse(mean, cov, ellipse_k)};
    }
  }
  throw ConfigError("unknown observation mode");
}

ObservationMode mode_of(const Observation& obs) {
  return static_cast<ObservationMode>(obs.index());
}

std::vector<double> payload_scalars(const Observation& obs) {
  std::vector<double> out;
  auto put = [&out](const Vec2& v) {
    out.push_back(v.x);
    out.push_back(v.y);
  };
  if (const auto* fs = std::get_if<FullStateView>(&obs)) {
    for (const Vec2& p : fs->positions) put(p);
  } else if (const auto* h = std::get_if<HullView>(&obs)) {
    for (const Vec2& p : h->vertices) put(p);
  } else if (const auto* m = std::get_if<MeanView>(&obs)) {
    put(m->mean);
  } else {
    const auto& mv = std::get<MeanVarianceView>(obs);
    put(mv.mean);
    out.insert(out.end(), {mv.covariance.xx, mv.covariance.xy, mv.covariance.yy,
                           mv.ellipse.semi_major, mv.ellipse.semi_minor});
  }
  return out;
}

Observation observation_from_payload(ObservationMode mode, std::span<const double> data,
                                     double radius, double ellipse_k) {
  auto points = [&data] {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i + 1 < data.size(); i += 2) pts.push_back({data[i], data[i + 1]});
    return pts;
  };
  auto require = [&](bool ok) {
    if (!ok) {
      throw ConfigError("payload of " + std::to_string(data.size()) +
                        " scalars does not fit mode " + std::string(to_string(mode)));
    }
  };
  switch (mode) {
    case ObservationMode::kFullState:
      require(!data.empty() && data.size() % 2 == 0);
      return FullStateView{points(), radius};
    case ObservationMode::kConvexHull:
      require(!data.empty() && data.size() % 2 == 0);
      return HullView{points()};
    case ObservationMode::kMean:
      require(data.size() == 2);
      return MeanView{{data[0], data[1]}};
    case ObservationMode::kMeanVariance: {
      require(data.size() == 7);
      const Vec2 mean{data[0], data[1]};
      const Cov2 cov{data[2], data[3], data[4]};
      Ellipse e = confidence_ellipse(mean, cov, ellipse_k);
      e.semi_major = data[5];
      e.semi_minor = data[6];
      return MeanVarianceView{mean, cov, e};
    }
  }
  throw ConfigError("unknown observation mode");
}

Vec2 observed_center(const Observation& obs) {
  if (const auto* fs = std::get_if<FullStateView>(&obs)) return swarm_mean(fs->positions);
  if (const auto* h = std::get_if<HullView>(&obs)) return swarm_mean(h->vertices);
  if (const auto* m = std::get_if<MeanView>(&obs)) return m->mean;
  return std::get<MeanVarianceView>(obs).mean;
}

std::string_view to_string(ObservationMode mode) {
  switch (mode) {
    case ObservationMode::kFullState: return "full_state";
    case ObservationMode::kConvexHull: return "convex_hull";
    case ObservationMode::kMean: return "mean";
    case ObservationMode::kMeanVariance: return "mean_variance";
  }
  return "?";
}

ObservationMode observation_mode_from_string(std::string_view name) {
  for (ObservationMode m : {ObservationMode::kFullState, ObservationMode::kConvexHull,
                            ObservationMode::kMean, ObservationMode::kMeanVariance}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown observation mode '" + std::string(name) + "'");
}

double polygon_signed_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * twice;
}

}  // namespace swarm::observe
