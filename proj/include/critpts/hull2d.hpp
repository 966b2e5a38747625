#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"

// Exact planar convex hulls and hull-intersection tests. Used as an LP-free
// oracle for separability in two dimensions.

namespace critpts::hull2d {

inline Rational orient(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

inline int sgn(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

/// Strict hull vertices in counter-clockwise order (Andrew's monotone chain).
/// Collinear inputs give one or two vertices.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline bool in_box(const Point& p, const Point& q, const Point& r) {
  return std::min(p[0], r[0]) <= q[0] && q[0] <= std::max(p[0], r[0]) && std::min(p[1], r[1]) <= q[1] &&
         q[1] <= std::max(p[1], r[1]);
}

/// Closed segments [p1,p2] and [q1,q2] share a point. Degenerate segments allowed.
inline bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  int o1 = sgn(orient(p1, p2, q1));
  int o2 = sgn(orient(p1, p2, q2));
  int o3 = sgn(orient(q1, q2, p1));
  int o4 = sgn(orient(q1, q2, p2));
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && in_box(p1, q1, p2)) return true;
  if (o2 == 0 && in_box(p1, q2, p2)) return true;
  if (o3 == 0 && in_box(q1, p1, q2)) return true;
  if (o4 == 0 && in_box(q1, p2, q2)) return true;
  return false;
}

/// Closed containment in a counter-clockwise polygon with at least 3 vertices.
inline bool inside_polygon(std::span<const Point> poly, const Point& q) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (orient(poly[i], poly[(i + 1) % poly.size()], q) < 0) return false;
  return true;
}

inline std::vector<std::pair<Point, Point>> edges(const std::vector<Point>& hull) {
  std::vector<std::pair<Point, Point>> out;
  if (hull.size() == 1) out.emplace_back(hull[0], hull[0]);
  if (hull.size() == 2) out.emplace_back(hull[0], hull[1]);
  if (hull.size() >= 3)
    for (std::size_t i = 0; i < hull.size(); ++i) out.emplace_back(hull[i], hull[(i + 1) % hull.size()]);
  return out;
}

inline bool hulls_intersect(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) return false;
  for (const auto& [p1, p2] : edges(a))
    for (const auto& [q1, q2] : edges(b))
      if (segments_intersect(p1, p2, q1, q2)) return true;
  if (a.size() >= 3 && inside_polygon(a, b.front())) return true;
  if (b.size() >= 3 && inside_polygon(b, a.front())) return true;
  return false;
}

}  // namespace critpts::hull2d

namespace critpts {

/// True iff conv(pos) and conv(neg) are disjoint. Two-dimensional only.
inline bool hull_oracle_2d(std::span<const Point> pos, std::span<const Point> neg) {
  for (const auto* side : {&pos, &neg})
    for (const auto& p : *side)
      if (p.size() != 2) throw Error(ErrorCode::DimensionMismatch, "hull oracle needs 2-D points");
  auto a = hull2d::convex_hull({pos.begin(), pos.end()});
  auto b = hull2d::convex_hull({neg.begin(), neg.end()});
  return !hull2d::hulls_intersect(a, b);
}

}  // namespace critpts
