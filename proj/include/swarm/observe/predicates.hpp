#pragma once

#include "swarm/vec2.hpp"

namespace swarm::observe {

// Sign of the orientation determinant of (a, b, c): +1 for a left turn
// (counter-clockwise), -1 for a right turn, 0 for exactly collinear.
// Exact for all finite double inputs: a floating-point filter with an exact
// expansion-arithmetic fallback.
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace swarm::observe
