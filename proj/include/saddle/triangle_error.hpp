#pragma once

// Exact L-infinity error of a linear piece against F(x, y) = x y over a
// triangle. Along an edge with endpoint deviations di, dj and edge product k
// the error is (1 - t) di + t dj + t (1 - t) k, so everything reduces to
// one-dimensional quadratics.

#include <array>
#include <optional>
#include <string>

#include "saddle/geometry.hpp"
#include "saddle/quadform.hpp"

namespace saddle {

/// Signed offsets l(v_i) - F(v_i) at the three vertices.
struct Deviations {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  std::array<double, 3> as_array() const { return {d1, d2, d3}; }
  friend bool operator==(const Deviations&, const Deviations&) = default;
};

struct EdgeAnalysis {
  double k = 0.0;
  std::optional<double> lambda_star;
  std::optional<double> extremal_error;
  double max_abs_error = 0.0;
  double argmax_lambda = 0.0;
  // Signed range of E over the closed edge.
  double min_error = 0.0;
  double max_error = 0.0;
};

double edge_product(Point p, Point q);
double edge_error(double lambda, double di, double dj, double k);
double lambda_star(double di, double dj, double k);
double extremal_edge_error(double di, double dj, double k);
EdgeAnalysis max_abs_error_edge(double di, double dj, double k);

/// Edge products (k1, k2, k3) of edges v1v2, v1v3, v2v3.
std::array<double, 3> edge_products(const Triangle& tri);

/// Per-edge analyses in the same edge order as `edge_products`.
std::array<EdgeAnalysis, 3> analyze_edges(const Triangle& tri, const Deviations& dev);

double max_abs_error_triangle(const Triangle& tri, const Deviations& dev);

LinearPiece plane_from_deviations(const Triangle& tri, const Deviations& dev);
Deviations deviations_from_plane(const Triangle& tri, const LinearPiece& piece);

/// Absolute slack used by `is_feasible`.
double feasibility_slack(double emin, double emax);

bool is_feasible(const Deviations& dev, double k1, double k2, double k3, double emin, double emax);

std::string to_json(const EdgeAnalysis& ea);

}  // namespace saddle
