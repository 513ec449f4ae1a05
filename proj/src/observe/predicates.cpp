#include "swarm/observe/predicates.hpp"

#include <array>
#include <cmath>

namespace swarm::observe {
namespace {

struct Pair {
  double hi;
  double lo;
};

Pair two_sum(double a, double b) {
  const double x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  return {x, (a - av) + (b - bv)};
}

Pair two_diff(double a, double b) { return two_sum(a, -b); }

Pair two_product(double a, double b) {
  const double x = a * b;
  return {x, std::fma(a, b, -x)};
}

// Exact sign of a sum of doubles. Builds a nonoverlapping expansion by
// repeated two_sum; the largest nonzero component carries the sign.
template <std::size_t N>
int exact_sign(const std::array<double, N>& terms) {
  std::array<double, N> e{};
  std::size_t len = 0;
  for (double b : terms) {
    double q = b;
    for (std::size_t i = 0; i < len; ++i) {
      const Pair s = two_sum(q, e[i]);
      e[i] = s.lo;
      q = s.hi;
    }
    e[len++] = q;
  }
  for (std::size_t i = len; i-- > 0;) {
    if (e[i] > 0.0) return 1;
    if (e[i] < 0.0) return -1;
  }
  return 0;
}

}  // namespace

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  constexpr double kEps = 0x1.0p-53;
  const double bound = (3.0 + 16.0 * kEps) * kEps * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;

  const Pair acx = two_diff(a.x, c.x);
  const Pair bcy = two_diff(b.y, c.y);
  const Pair acy = two_diff(a.y, c.y);
  const Pair bcx = two_diff(b.x, c.x);
  std::array<double, 16> terms{};
  std::size_t k = 0;
  for (double u : {acx.hi, acx.lo}) {
    for (double v : {bcy.hi, bcy.lo}) {
      const Pair p = two_product(u, v);
      terms[k++] = p.hi;
      terms[k++] = p.lo;
    }
  }
  for (double u : {acy.hi, acy.lo}) {
    for (double v : {bcx.hi, bcx.lo}) {
      const Pair p = two_product(u, v);
      terms[k++] = -p.hi;
      terms[k++] = -p.lo;
    }
  }
  return exact_sign(terms);
}

}  // namespace swarm::observe
