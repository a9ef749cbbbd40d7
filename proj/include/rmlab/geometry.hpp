#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace rmlab {

/// Point of the plate mid-plane.
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)}; }

/// Signed area of the triangle (a, b, c); positive when counterclockwise.
inline double triangle_signed_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * cross(b - a, c - a);
}

/// Exact distance from point p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Exact distance between two closed segments.
double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

/// Diameter (largest pairwise distance) of a point set. Brute force.
double point_set_diameter(const std::vector<Point2>& pts);

/// Area of the intersection of the disc B_r(center) with a triangle.
/// Exact up to floating-point roundoff; handles all containment cases.
double disc_triangle_intersection_area(Point2 center, double r,
                                       Point2 a, Point2 b, Point2 c);

/// Area of the intersection of the disc B_r(center) with a simple polygon
/// given by its vertices (any orientation; result is non-negative).
double disc_polygon_intersection_area(Point2 center, double r,
                                      const std::vector<Point2>& poly);

}  // namespace rmlab
