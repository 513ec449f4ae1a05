#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "swarm/vec2.hpp"

namespace swarm::observe {

enum class ObservationMode { kFullState, kConvexHull, kMean, kMeanVariance };

// Symmetric 2x2 covariance, m^2.
struct Cov2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

struct Ellipse {
  Vec2 center;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double orientation = 0.0;  // principal axis angle in (-pi/2, pi/2]
};

struct FullStateView {
  std::vector<Vec2> positions;
  double radius = 0.0;
};
struct HullView {
  std::vector<Vec2> vertices;  // counter-clockwise
};
struct MeanView {
  Vec2 mean;
};
struct MeanVarianceView {
  Vec2 mean;
  Cov2 covariance;
  Ellipse ellipse;
};

using Observation = std::variant<FullStateView, HullView, MeanView, MeanVarianceView>;

// Minimal counter-clockwise hull cycle. Collinear boundary points and
// duplicates are dropped; one or two distinct points come back as-is.
// Throws ConfigError on empty input.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

// Throws ConfigError on empty input.
Vec2 swarm_mean(std::span<const Vec2> points);

// Population covariance (divide by n) about the given mean.
Cov2 swarm_covariance(std::span<const Vec2> points, const Vec2& mean);

// k-sigma ellipse: semi-axes k sqrt(lambda). Isotropic covariance gives
// orientation 0.
Ellipse confidence_ellipse(const Vec2& mean, const Cov2& cov, double k = 2.0);

// Throws ConfigError on an empty swarm.
Observation make_observation(ObservationMode mode, std::span<const Vec2> positions,
                             double radius, double ellipse_k = 2.0);

ObservationMode mode_of(const Observation& obs);

// Scalars an observation puts on the wire: 2n for full state, 2 per hull
// vertex, 2 for the mean, and mean + covariance + semi-axes (7) for
// mean + variance. The ellipse orientation is recovered from the covariance.
std::vector<double> payload_scalars(const Observation& obs);

// Inverse of payload_scalars. Throws ConfigError if the count does not fit
// the mode.
Observation observation_from_payload(ObservationMode mode, std::span<const double> data,
                                     double radius, double ellipse_k = 2.0);

// Centroid the swarm-level controllers steer with: the mean for the
// mean-based views, the vertex average for the hull.
Vec2 observed_center(const Observation& obs);

std::string_view to_string(ObservationMode mode);
// Throws ConfigError for unknown names.
ObservationMode observation_mode_from_string(std::string_view name);

double polygon_signed_area(std::span<const Vec2> polygon);

}  // namespace swarm::observe
