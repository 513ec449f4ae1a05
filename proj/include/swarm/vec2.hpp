#pragma once

#include <cmath>

namespace swarm {

// Planar vector. Meters or newtons depending on context.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(const Vec2& a, double s) {
    return {a.x / s, a.y / s};
  }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
// Cross product of a scalar (out-of-plane) with a vector.
constexpr Vec2 cross(double w, const Vec2& v) { return {-w * v.y, w * v.x}; }
constexpr Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }
constexpr double length_squared(const Vec2& v) { return dot(v, v); }
inline double length(const Vec2& v) { return std::sqrt(dot(v, v)); }

// Unit vector along v, or the zero vector when v is zero.
inline Vec2 normalize_or_zero(const Vec2& v) {
  const double len = length(v);
  if (len == 0.0) return {};
  return v / len;
}

inline bool is_finite(const Vec2& v) {
  return std::isfinite(v.x) && std::isfinite(v.y);
}

}  // namespace swarm
