#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace saddle {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
  friend constexpr Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
  friend constexpr Point operator-(Point p) { return {-p.x, -p.y}; }
  friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point p, Point q) = default;
};

constexpr double cross(Point p, Point q) { return p.x * q.y - p.y * q.x; }
constexpr double dot(Point p, Point q) { return p.x * q.x + p.y * q.y; }

struct Box {
  Point lo;
  Point hi;

  // Closed square [-half, half]^2.
  static constexpr Box centered(double half) { return {{-half, -half}, {half, half}}; }
  constexpr bool contains(Point p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

/// Three planar vertices. Orientation is whatever the caller supplies;
/// `signed_area` is positive for counter-clockwise order.
struct Triangle {
  Point v1;
  Point v2;
  Point v3;

  constexpr double signed_area() const { return 0.5 * cross(v2 - v1, v3 - v1); }
  double area() const { return std::abs(signed_area()); }

  std::array<Point, 3> vertices() const { return {v1, v2, v3}; }

  double bbox_diagonal_sq() const {
    const double w = std::max({v1.x, v2.x, v3.x}) - std::min({v1.x, v2.x, v3.x});
    const double h = std::max({v1.y, v2.y, v3.y}) - std::min({v1.y, v2.y, v3.y});
    return w * w + h * h;
  }

  // area < 1e-12 * diag^2 counts as degenerate
  bool is_degenerate() const {
    const double diag_sq = bbox_diagonal_sq();
    return diag_sq == 0.0 || area() < 1e-12 * diag_sq;
  }

  Box bounds() const {
    return {{std::min({v1.x, v2.x, v3.x}), std::min({v1.y, v2.y, v3.y})},
            {std::max({v1.x, v2.x, v3.x}), std::max({v1.y, v2.y, v3.y})}};
  }

  /// Barycentric coordinates of p (w1, w2, w3), summing to one.
  std::array<double, 3> barycentric(Point p) const {
    const double d = cross(v2 - v1, v3 - v1);
    const double w2 = cross(p - v1, v3 - v1) / d;
    const double w3 = cross(v2 - v1, p - v1) / d;
    return {1.0 - w2 - w3, w2, w3};
  }

  /// Closed containment with a barycentric slack of `tol`.
  bool contains(Point p, double tol = 1e-12) const {
    const auto w = barycentric(p);
    return w[0] >= -tol && w[1] >= -tol && w[2] >= -tol;
  }

  Point at(double w1, double w2, double w3) const {
    return {w1 * v1.x + w2 * v2.x + w3 * v3.x, w1 * v1.y + w2 * v2.y + w3 * v3.y};
  }
};

/// Closed-set intersection test between a triangle and an axis-aligned box,
/// by the separating axis theorem. Candidate axes are the two box normals and
/// the three edge normals of the triangle.
inline bool intersects(const Triangle& tri, const Box& box) {
  const Box tb = tri.bounds();
  if (tb.hi.x < box.lo.x || tb.lo.x > box.hi.x || tb.hi.y < box.lo.y || tb.lo.y > box.hi.y) {
    return false;
  }
  const std::array<Point, 3> v = tri.vertices();
  const std::array<Point, 4> corners = {
      box.lo, Point{box.hi.x, box.lo.y}, box.hi, Point{box.lo.x, box.hi.y}};
  for (int e = 0; e < 3; ++e) {
    const Point edge = v[(e + 1) % 3] - v[e];
    const Point normal{-edge.y, edge.x};
    double tmin = dot(normal, v[0]);
    double tmax = tmin;
    for (int i = 1; i < 3; ++i) {
      const double t = dot(normal, v[i]);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    double bmin = dot(normal, corners[0]);
    double bmax = bmin;
    for (int i = 1; i < 4; ++i) {
      const double t = dot(normal, corners[i]);
      bmin = std::min(bmin, t);
      bmax = std::max(bmax, t);
    }
    if (tmax < bmin || bmax < tmin) return false;
  }
  return true;
}

}  // namespace saddle
