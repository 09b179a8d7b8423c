#include "saddle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddle/error.hpp"
#include "saddle/format.hpp"

namespace saddle {

std::string_view kind_name(ApproxKind kind) {
  switch (kind) {
    case ApproxKind::General: return "general";
    case ApproxKind::Continuous: return "continuous";
    case ApproxKind::Interpolation: return "interpolation";
    case ApproxKind::Overestimation: return "overestimation";
    case ApproxKind::Underestimation: return "underestimation";
    case ApproxKind::ContinuousOver: return "continuous-over";
    case ApproxKind::ContinuousUnder: return "continuous-under";
  }
  return "?";
}

std::optional<ApproxKind> parse_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (s == "general") return ApproxKind::General;
  if (s == "continuous") return ApproxKind::Continuous;
  if (s == "interpolation") return ApproxKind::Interpolation;
  if (s == "over" || s == "overestimation") return ApproxKind::Overestimation;
  if (s == "under" || s == "underestimation") return ApproxKind::Underestimation;
  if (s == "continuous-over" || s == "continuousover" || s == "cont-over")
    return ApproxKind::ContinuousOver;
  if (s == "continuous-under" || s == "continuousunder" || s == "cont-under")
    return ApproxKind::ContinuousUnder;
  return std::nullopt;
}

double ApproximationSpec::emin() const {
  switch (kind) {
    case ApproxKind::Overestimation:
    case ApproxKind::ContinuousOver: return 0.0;
    default: return -epsilon;
  }
}

double ApproximationSpec::emax() const {
  switch (kind) {
    case ApproxKind::Underestimation:
    case ApproxKind::ContinuousUnder: return 0.0;
    default: return epsilon;
  }
}

bool ApproximationSpec::constant_deviation() const {
  return kind == ApproxKind::Continuous || kind == ApproxKind::ContinuousOver ||
         kind == ApproxKind::ContinuousUnder || kind == ApproxKind::Interpolation;
}

char box_vertex_label(BoxVertexType t) { return static_cast<char>('A' + static_cast<int>(t)); }

SlackPair slack_from_deviation(double d, double emin, double emax) {
  if (!(d >= emin && d <= emax)) {
    throw Error(ErrorKind::DeviationOutOfRange,
                fmt17(d) + " outside [" + fmt17(emin) + ", " + fmt17(emax) + "]");
  }
  return {std::sqrt(emax - d), std::sqrt(d - emin)};
}

namespace {

void check_slack(double a, double sigma) {
  const double hi = std::sqrt(sigma);
  if (!(a >= -1e-12 * hi && a <= hi * (1.0 + 1e-12))) {
    throw Error(ErrorKind::SlackOutOfRange, fmt17(a) + " outside [0, sqrt(sigma)]");
  }
}

double complement(double a, double sigma) { return std::sqrt(std::max(0.0, sigma - a * a)); }

}  // namespace

BoxEndpoints box_endpoints(double a1, double a2, double a3, double sigma) {
  check_slack(a1, sigma);
  check_slack(a2, sigma);
  check_slack(a3, sigma);
  const double b2 = complement(a2, sigma);
  const double b3 = complement(a3, sigma);
  auto sq = [](double v) { return v * v; };
  return {sq(a1 + a2), sq(a1 + a3), sq(a2 + a3), sq(b2 + b3)};
}

double area_sq_from_k(double k1, double k2, double k3) {
  const double s = k1 + k2 - k3;
  return s * s - 4.0 * k1 * k2;
}

Triangle realize_triangle(double k1, double k2, double k3, double t) {
  if (!(t > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "need t > 0 and k1, k2 > 0");
  }
  const double four_a_sq = area_sq_from_k(k1, k2, k3);
  if (!(four_a_sq > 0.0)) {
    throw Error(ErrorKind::UnrealizableProducts, "(k1 + k2 - k3)^2 - 4 k1 k2 is not positive");
  }
  // k1 s^2 + bq s + k2 t^2 = 0
  const double bq = -(k1 + k2 - k3) * t;
  const double root = std::sqrt(four_a_sq) * t;
  const double q = -0.5 * (bq + std::copysign(root, bq));
  const double r1 = q / k1;
  const double r2 = k2 * t * t / q;
  const double s = std::min(r1, r2);
  return {{0.0, 0.0}, {t, k1 / t}, {s, k2 / s}};
}

double type_a_objective(double a1, double a2, double a3, double sigma) {
  const BoxEndpoints e = box_endpoints(a1, a2, a3, sigma);
  const double diff = e.p12 - e.p13;
  return diff * diff + e.q * (e.q + 2.0 * e.p12 + 2.0 * e.p13);
}

CertificateGap certificate_gap(double a, double b, double sigma) {
  check_slack(a, sigma);
  check_slack(b, sigma);
  const double rs = std::sqrt(sigma);
  const double objective = 16.0 * (sigma - b * b) * (sigma + a * a + 2.0 * a * b);
  CertificateGap c;
  c.gap = 1024.0 * sigma * sigma / 27.0 - objective;
  const double lean = 3.0 * b - rs;
  c.term1 = 32.0 * rs / 27.0 * lean * lean * (3.0 * b + 5.0 * rs);
  c.term2 = 16.0 * (sigma - b * b) * (rs - a) * (rs + a + 2.0 * b);
  return c;
}

BoxVertexResult box_vertex_enumerate(double a1, double a2, double a3, double sigma) {
  const BoxEndpoints e = box_endpoints(a1, a2, a3, sigma);
  BoxVertexResult best;
  bool have = false;
  // Enumerate k1 in {P12, 0}, k2 in {P13, 0}, k3 in {-Q, P23}; Type A comes first.
  for (int i1 = 0; i1 < 2; ++i1) {
    for (int i2 = 0; i2 < 2; ++i2) {
      for (int i3 = 0; i3 < 2; ++i3) {
        const double k1 = i1 == 0 ? e.p12 : 0.0;
        const double k2 = i2 == 0 ? e.p13 : 0.0;
        const double k3 = i3 == 0 ? -e.q : e.p23;
        const double v = area_sq_from_k(k1, k2, k3);
        BoxVertexType type;
        const int zeros = i1 + i2;
        if (zeros == 0) {
          type = i3 == 0 ? BoxVertexType::A : BoxVertexType::B;
        } else if (zeros == 1) {
          type = i3 == 0 ? BoxVertexType::C : BoxVertexType::D;
        } else {
          type = BoxVertexType::E;
        }
        if (!have || v > best.value) {
          best = {v, type, {k1, k2, k3}};
          have = true;
        }
      }
    }
  }
  return best;
}

double continuous_area(double delta, double epsilon) {
  const double lo = epsilon + delta;
  const double hi = 20.0 * epsilon - 12.0 * delta;
  if (!(delta >= -epsilon && delta <= epsilon) || lo < 0.0 || hi < 0.0) {
    throw Error(ErrorKind::OutOfRange, "delta " + fmt17(delta) + " outside [-eps, eps]");
  }
  return std::sqrt(lo * hi);
}

OptimalSolution optimal_triangle(const ApproximationSpec& spec) {
  if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon)) {
    throw Error(ErrorKind::InvalidEpsilon, "epsilon must be positive");
  }
  const double emin = spec.emin();
  const double emax = spec.emax();
  const double sigma = spec.sigma();

  OptimalSolution sol;
  sol.kind = spec.kind;
  sol.epsilon = spec.epsilon;

  double k = 0.0;  // ascending edge product (both ascending edges)
  double w = 0.0;  // minus the descending edge product
  if (spec.constant_deviation()) {
    // Constant deviation D: ascending edges need D + k/4 <= emax, the descending
    // edge D - w/4 >= emin. With u = D - emin the squared area is
    // u (16 sigma - 12 u), maximal at u = 2 sigma / 3. Interpolation pins D = 0.
    const double delta = spec.interpolation() ? 0.0 : emin + 2.0 * sigma / 3.0;
    sol.deviations = {delta, delta, delta};
    k = 4.0 * (emax - delta);
    w = 4.0 * (delta - emin);
  } else {
    // Type A optimum of the slack problem: a1 = sqrt(sigma), a2 = a3 = sqrt(sigma)/3.
    const double a1 = std::sqrt(sigma);
    const double a23 = std::sqrt(sigma) / 3.0;
    sol.deviations = {emax - sigma, emax - sigma / 9.0, emax - sigma / 9.0};
    const BoxEndpoints e = box_endpoints(a1, a23, a23, sigma);
    k = e.p12;
    w = e.q;
  }
  sol.k_ascending = k;
  sol.k_descending = -w;
  sol.area = 0.5 * std::sqrt(area_sq_from_k(k, k, -w));
  sol.density = 1.0 / sol.area;
  sol.lambda_ascending = lambda_star(sol.deviations.d1, sol.deviations.d2, k);
  sol.lambda_descending = lambda_star(sol.deviations.d2, sol.deviations.d3, -w);

  // Symmetric form (x2, y2) = (y3, x3): x2 - y2 = sqrt(w), x2 + y2 = sqrt(4k + w).
  const double diff = std::sqrt(w);
  const double sum = std::sqrt(4.0 * k + w);
  const double x2 = 0.5 * (sum + diff);
  const double y2 = 2.0 * k / (sum + diff);
  sol.vertices = {{0.0, 0.0}, {x2, y2}, {y2, x2}};
  sol.aspect_ratio = x2 / y2;
  return sol;
}

std::string to_json(const OptimalSolution& sol) {
  std::ostringstream os;
  auto pt = [](Point p) { return "[" + fmt17(p.x) + "," + fmt17(p.y) + "]"; };
  os << "{\"kind\":\"" << kind_name(sol.kind) << "\",\"epsilon\":" << fmt17(sol.epsilon)
     << ",\"area\":" << fmt17(sol.area) << ",\"density\":" << fmt17(sol.density)
     << ",\"deviations\":[" << fmt17(sol.deviations.d1) << "," << fmt17(sol.deviations.d2) << ","
     << fmt17(sol.deviations.d3) << "],\"k_ascending\":" << fmt17(sol.k_ascending)
     << ",\"k_descending\":" << fmt17(sol.k_descending)
     << ",\"lambda_ascending\":" << fmt17(sol.lambda_ascending)
     << ",\"lambda_descending\":" << fmt17(sol.lambda_descending) << ",\"vertices\":["
     << pt(sol.vertices.v1) << "," << pt(sol.vertices.v2) << "," << pt(sol.vertices.v3)
     << "],\"aspect_ratio\":" << fmt17(sol.aspect_ratio) << "}";
  return os.str();
}

std::vector<Point> hyperbola_intersections(Point u1, Point u2, double kstar) {
  if (u1 == u2) throw Error(ErrorKind::IdenticalCenters, "hyperbola centers coincide");
  if (!(kstar > 0.0)) throw Error(ErrorKind::InvalidParameter, "k* must be positive");
  const double p1 = u1.x, q1 = u1.y, p2 = u2.x, q2 = u2.y;
  // Same center abscissa: (x - p)(q2 - q1) = 0 forces x = p, where neither branch lives.
  if (q1 == q2 || p1 == p2) return {};

  // (q1 - q2)(x - p1)(x - p2) = k (p2 - p1)
  const double qa = q1 - q2;
  const double qb = -qa * (p1 + p2);
  const double qc = qa * p1 * p2 - kstar * (p2 - p1);
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return {};

  std::vector<double> xs;
  if (disc == 0.0) {
    xs.push_back(-qb / (2.0 * qa));
  } else {
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    xs.push_back(q / qa);
    if (q != 0.0) xs.push_back(qc / q);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Point> out;
  for (double x : xs) {
    if (x == p1) continue;
    out.push_back({x, q1 + kstar / (x - p1)});
  }
  return out;
}

}  // namespace saddle
