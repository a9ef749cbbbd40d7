#include "rmlab/geometry.hpp"

#include <algorithm>

namespace rmlab {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double dd = dot(d, d);
  if (dd == 0.0) return norm(p - a);
  double t = dot(p - a, d) / dd;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

namespace {

int orientation_sign(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) &&
         std::min(a.x2, b.x2) <= p.x2 && p.x2 <= std::max(a.x2, b.x2);
}

bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  const int o1 = orientation_sign(a0, a1, b0);
  const int o2 = orientation_sign(a0, a1, b1);
  const int o3 = orientation_sign(b0, b1, a0);
  const int o4 = orientation_sign(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

}  // namespace

double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min(std::min(point_segment_distance(a0, b0, b1),
                           point_segment_distance(a1, b0, b1)),
                  std::min(point_segment_distance(b0, a0, a1),
                           point_segment_distance(b1, a0, a1)));
}

double point_set_diameter(const std::vector<Point2>& pts) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Point2 e = pts[j] - pts[i];
      d2 = std::max(d2, dot(e, e));
    }
  return std::sqrt(d2);
}

namespace {

// Signed contribution of the directed edge A->B (coordinates relative to the
// disc center) to the area of disc-polygon intersection, via Green's theorem.
// Sub-arcs outside the disc contribute circular sectors, inside parts the
// triangle with the center.
double edge_disc_contribution(Point2 A, Point2 B, double r) {
  const auto sector = [&](Point2 P, Point2 Q) {
    return 0.5 * r * r * std::atan2(cross(P, Q), dot(P, Q));
  };
  const Point2 d = B - A;
  const double dd = dot(d, d);
  if (dd == 0.0) return 0.0;
  const double bh = dot(A, d) / dd;
  const double c = (dot(A, A) - r * r) / dd;
  const double disc = bh * bh - c;
  if (disc <= 0.0) return sector(A, B);  // line misses the disc
  const double s = std::sqrt(disc);
  const double t1 = std::max(-bh - s, 0.0);
  const double t2 = std::min(-bh + s, 1.0);
  if (t1 >= t2) return sector(A, B);  // chord lies outside [A,B]
  const Point2 P = A + t1 * d;
  const Point2 Q = A + t2 * d;
  double area = 0.5 * cross(P, Q);
  if (t1 > 0.0) area += sector(A, P);
  if (t2 < 1.0) area += sector(Q, B);
  return area;
}

}  // namespace

double disc_polygon_intersection_area(Point2 center, double r,
                                      const std::vector<Point2>& poly) {
  if (poly.size() < 3 || r <= 0.0) return 0.0;
  double signed_area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i] - center;
    const Point2 b = poly[(i + 1) % poly.size()] - center;
    signed_area += edge_disc_contribution(a, b, r);
  }
  return std::max(std::abs(signed_area), 0.0);
}

double disc_triangle_intersection_area(Point2 center, double r,
                                       Point2 a, Point2 b, Point2 c) {
  return disc_polygon_intersection_area(center, r, {a, b, c});
}

}  // namespace rmlab
