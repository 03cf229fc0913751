#include "phantom/geometry.hpp"

namespace phantom {

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}

namespace {

int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

}  // namespace

bool segments_cross(Point p1, Point p2, const Segment& w) {
  const int o1 = orientation(p1, p2, w.a);
  const int o2 = orientation(p1, p2, w.b);
  const int o3 = orientation(w.a, w.b, p1);
  const int o4 = orientation(w.a, w.b, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

std::optional<RayCircleHits> ray_circle(Point origin, Point dir, const Disc& disc) {
  const Point f = origin - disc.center;
  const double b = dot(f, dir);
  const double c = dot(f, f) - disc.radius * disc.radius;
  const double disc_term = b * b - c;
  if (disc_term <= 0.0) return std::nullopt;
  const double root = std::sqrt(disc_term);
  return RayCircleHits{-b - root, -b + root};
}

}  // namespace phantom
