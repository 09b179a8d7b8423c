#include "saddle/triangle_error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddle/error.hpp"
#include "saddle/format.hpp"

namespace saddle {

double edge_product(Point p, Point q) { return (q.x - p.x) * (q.y - p.y); }

double edge_error(double lambda, double di, double dj, double k) {
  return (1.0 - lambda) * di + lambda * dj + lambda * (1.0 - lambda) * k;
}

double lambda_star(double di, double dj, double k) {
  if (k == 0.0) throw Error(ErrorKind::ZeroEdgeProduct, "edge is axis-parallel");
  return (dj - di) / (2.0 * k) + 0.5;
}

double extremal_edge_error(double di, double dj, double k) {
  const double ls = lambda_star(di, dj, k);
  if (!(ls > 0.0 && ls < 1.0)) {
    throw Error(ErrorKind::ExtremumOutsideEdge, "lambda* = " + fmt17(ls) + " is not in (0, 1)");
  }
  const double diff = dj - di;
  return 0.5 * (di + dj) + 0.25 * k + diff * diff / (4.0 * k);
}

EdgeAnalysis max_abs_error_edge(double di, double dj, double k) {
  EdgeAnalysis ea;
  ea.k = k;

  struct Candidate {
    double lambda;
    double value;
    bool interior;
  };
  std::array<Candidate, 3> cands{};
  std::size_t n = 0;
  cands[n++] = {0.0, di, false};
  cands[n++] = {1.0, dj, false};
  if (k != 0.0) {
    const double ls = lambda_star(di, dj, k);
    ea.lambda_star = ls;
    if (ls > 0.0 && ls < 1.0) {
      const double diff = dj - di;
      const double value = 0.5 * (di + dj) + 0.25 * k + diff * diff / (4.0 * k);
      ea.extremal_error = value;
      cands[n++] = {ls, value, true};
    }
  }

  ea.min_error = cands[0].value;
  ea.max_error = cands[0].value;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    ea.min_error = std::min(ea.min_error, cands[i].value);
    ea.max_error = std::max(ea.max_error, cands[i].value);
    best = std::max(best, std::abs(cands[i].value));
  }
  ea.max_abs_error = best;

  // Ties within rounding: the interior extremum wins, otherwise the smallest lambda.
  const double tie = 1e-12 * std::max(1.0, best);
  auto attains = [&](const Candidate& c) { return best - std::abs(c.value) <= tie; };
  if (n == 3 && attains(cands[2])) {
    ea.argmax_lambda = cands[2].lambda;
  } else {
    ea.argmax_lambda = attains(cands[0]) ? 0.0 : 1.0;
  }
  return ea;
}

std::array<double, 3> edge_products(const Triangle& tri) {
  return {edge_product(tri.v1, tri.v2), edge_product(tri.v1, tri.v3),
          edge_product(tri.v2, tri.v3)};
}

std::array<EdgeAnalysis, 3> analyze_edges(const Triangle& tri, const Deviations& dev) {
  const auto k = edge_products(tri);
  return {max_abs_error_edge(dev.d1, dev.d2, k[0]), max_abs_error_edge(dev.d1, dev.d3, k[1]),
          max_abs_error_edge(dev.d2, dev.d3, k[2])};
}

double max_abs_error_triangle(const Triangle& tri, const Deviations& dev) {
  if (tri.is_degenerate()) throw Error(ErrorKind::DegenerateTriangle, "zero-area triangle");
  double worst = 0.0;
  for (const auto& ea : analyze_edges(tri, dev)) worst = std::max(worst, ea.max_abs_error);
  return worst;
}

LinearPiece plane_from_deviations(const Triangle& tri, const Deviations& dev) {
  if (tri.is_degenerate()) throw Error(ErrorKind::DegenerateTriangle, "singular plane fit");
  const Point e2 = tri.v2 - tri.v1;
  const Point e3 = tri.v3 - tri.v1;
  const double z1 = tri.v1.x * tri.v1.y + dev.d1;
  const double dz2 = tri.v2.x * tri.v2.y + dev.d2 - z1;
  const double dz3 = tri.v3.x * tri.v3.y + dev.d3 - z1;
  const double det = cross(e2, e3);
  const double alpha = (dz2 * e3.y - dz3 * e2.y) / det;
  const double beta = (e2.x * dz3 - e3.x * dz2) / det;
  return {alpha, beta, z1 - alpha * tri.v1.x - beta * tri.v1.y};
}

Deviations deviations_from_plane(const Triangle& tri, const LinearPiece& piece) {
  auto dev_at = [&](Point p) { return piece(p) - p.x * p.y; };
  return {dev_at(tri.v1), dev_at(tri.v2), dev_at(tri.v3)};
}

double feasibility_slack(double emin, double emax) { return 1e-9 * std::max(1.0, emax - emin); }

bool is_feasible(const Deviations& dev, double k1, double k2, double k3, double emin,
                 double emax) {
  const double slack = feasibility_slack(emin, emax);
  const auto d = dev.as_array();
  for (double di : d) {
    if (di < emin - slack || di > emax + slack) {
      throw Error(ErrorKind::DeviationOutOfRange,
                  "deviation " + fmt17(di) + " outside [" + fmt17(emin) + ", " + fmt17(emax) + "]");
    }
  }
  auto upper = [&](double di) { return std::sqrt(std::max(0.0, emax - di)); };
  auto lower = [&](double di) { return std::sqrt(std::max(0.0, di - emin)); };
  auto edge_ok = [&](double di, double dj, double k) {
    if (k > 0.0) {
      const double s = upper(di) + upper(dj);
      return k <= s * s + slack;
    }
    if (k < 0.0) {
      const double s = lower(di) + lower(dj);
      return -k <= s * s + slack;
    }
    return true;
  };
  return edge_ok(d[0], d[1], k1) && edge_ok(d[0], d[2], k2) && edge_ok(d[1], d[2], k3);
}

std::string to_json(const EdgeAnalysis& ea) {
  std::ostringstream os;
  os << "{\"k\":" << fmt17(ea.k) << ",\"lambda_star\":"
     << (ea.lambda_star ? fmt17(*ea.lambda_star) : "null") << ",\"extremal_error\":"
     << (ea.extremal_error ? fmt17(*ea.extremal_error) : "null")
     << ",\"max_abs_error\":" << fmt17(ea.max_abs_error)
     << ",\"argmax_lambda\":" << fmt17(ea.argmax_lambda) << "}";
  return os.str();
}

}  // namespace saddle
