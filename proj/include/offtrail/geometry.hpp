#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace offtrail {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Normalize an angle into (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a <= -M_PI) a += two_pi;
  if (a > M_PI) a -= two_pi;
  return a;
}

struct Rect {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }

  bool contains(const Vec2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  // True when the whole disc of radius r around p lies inside.
  bool contains_disc(const Vec2& p, double r) const {
    return p.x - r >= xmin && p.x + r <= xmax && p.y - r >= ymin &&
           p.y + r <= ymax;
  }
  Vec2 center() const { return {(xmin + xmax) / 2.0, (ymin + ymax) / 2.0}; }
};

inline double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq <= 0.0) return dist(p, a);
  double t = (p - a).dot(ab) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + ab * t);
}

inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                               const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const double v = (q - p).cross(r - p);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
  };
  auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, c, b)) return true;
  if (o2 == 0 && on_segment(a, d, b)) return true;
  if (o3 == 0 && on_segment(c, a, d)) return true;
  if (o4 == 0 && on_segment(c, b, d)) return true;
  return false;
}

inline double segment_segment_dist(const Vec2& a, const Vec2& b, const Vec2& c,
                                   const Vec2& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min(std::min(point_segment_dist(a, c, d),
                           point_segment_dist(b, c, d)),
                  std::min(point_segment_dist(c, a, b),
                           point_segment_dist(d, a, b)));
}

using Polygon = std::vector<Vec2>;

// Even-odd rule; boundary points may land on either side, callers that care
// pair this with a boundary-distance test.
inline bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& pi = poly[i];
    const Vec2& pj = poly[j];
    if ((pi.y > p.y) != (pj.y > p.y)) {
      const double x_int = pj.x + (pi.x - pj.x) * (p.y - pj.y) / (pi.y - pj.y);
      if (p.x < x_int) inside = !inside;
    }
  }
  return inside;
}

inline double point_polygon_boundary_dist(const Vec2& p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best, point_segment_dist(p, poly[j], poly[i]));
  }
  return best;
}

inline bool segment_intersects_polygon(const Vec2& a, const Vec2& b,
                                       const Polygon& poly) {
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    if (segments_intersect(a, b, poly[j], poly[i])) return true;
  }
  return point_in_polygon(a, poly) || point_in_polygon(b, poly);
}

}  // namespace offtrail
