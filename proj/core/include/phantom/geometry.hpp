#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>

namespace phantom {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }
inline double distance(Point a, Point b) { return norm(a - b); }

inline Point unit_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Maps any angle onto [0, 2*pi).
double wrap_angle(double radians);

struct Segment {
  Point a;
  Point b;
};

struct Disc {
  Point center;
  double radius = 0.0;

  bool contains(Point p) const {
    const Point d = p - center;
    return dot(d, d) <= radius * radius;
  }
};

/// Axis-aligned rectangle [min.x, max.x] x [min.y, max.y].
struct Rect {
  Point min;
  Point max;

  bool contains(Point p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
};

/// True when the open segments p1-p2 and w.a-w.b cross at a single interior
/// point of both. Touching at an endpoint and collinear overlap do not count.
bool segments_cross(Point p1, Point p2, const Segment& w);

/// Line parameters where origin + t*dir meets the circle, near <= far.
/// Either may be negative. `dir` must be a unit vector. Empty when the line
/// misses the circle or is tangent to it.
struct RayCircleHits {
  double near = 0.0;
  double far = 0.0;
};
std::optional<RayCircleHits> ray_circle(Point origin, Point dir, const Disc& disc);

}  // namespace phantom
