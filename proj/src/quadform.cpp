#include "saddle/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "saddle/error.hpp"
#include "saddle/format.hpp"

namespace saddle {

const char* reduction_case_name(ReductionCase c) {
  switch (c) {
    case ReductionCase::BilinearOnly: return "BilinearOnly";
    case ReductionCase::ShearA: return "ShearA";
    case ReductionCase::ShearC: return "ShearC";
    case ReductionCase::Asymptote: return "Asymptote";
  }
  return "?";
}

namespace {

Matrix2 invert(const Matrix2& m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

double det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

}  // namespace

Point StandardReduction::inverse(Point q) const {
  const Matrix2 m = invert(phi);
  return {m[0][0] * q.x + m[0][1] * q.y, m[1][0] * q.x + m[1][1] * q.y};
}

std::array<double, 3> substitute_quadratic(const QuadraticForm& qf, const Matrix2& m) {
  // x = m00 u + m01 v, y = m10 u + m11 v; expand M^T Q M.
  const double q00 = qf.a, q01 = qf.b, q11 = qf.c;
  auto bilinear = [&](int i, int j) {
    return m[0][i] * (q00 * m[0][j] + q01 * m[1][j]) + m[1][i] * (q01 * m[0][j] + q11 * m[1][j]);
  };
  return {bilinear(0, 0), 2.0 * bilinear(0, 1), bilinear(1, 1)};
}

double evaluate(const QuadraticForm& qf, Point p) { return qf(p); }

double discriminant(const QuadraticForm& qf) { return qf.a * qf.c - qf.b * qf.b; }

StandardReduction reduce_to_standard(const QuadraticForm& qf) {
  const double disc = discriminant(qf);
  const double scale = std::max({std::abs(qf.a), std::abs(qf.b), std::abs(qf.c)});
  if (!(disc < 0.0)) {
    throw Error(ErrorKind::NotIndefinite, "ac - b^2 = " + fmt17(disc) + " is not negative");
  }
  if (-disc < 1e-14 * scale * scale) {
    throw Error(ErrorKind::NearDegenerate, "|ac - b^2| is numerically zero");
  }

  const bool zero_a = std::abs(qf.a) <= 1e-12 * scale;
  const bool zero_c = std::abs(qf.c) <= 1e-12 * scale;

  StandardReduction red;
  Matrix2 m{};  // (x, y) = m (u, v)
  if (zero_a && zero_c) {
    red.case_tag = ReductionCase::BilinearOnly;
    red.phi = {{{1.0, 0.0}, {0.0, 1.0}}};
    m = red.phi;
  } else if (zero_c) {
    // x = u, y = v - (a / 2b) u
    red.case_tag = ReductionCase::ShearA;
    const double s = qf.a / (2.0 * qf.b);
    m = {{{1.0, 0.0}, {-s, 1.0}}};
    red.phi = {{{1.0, 0.0}, {s, 1.0}}};
  } else if (zero_a) {
    // y = v, x = u - (c / 2b) v
    red.case_tag = ReductionCase::ShearC;
    const double s = qf.c / (2.0 * qf.b);
    m = {{{1.0, -s}, {0.0, 1.0}}};
    red.phi = {{{1.0, s}, {0.0, 1.0}}};
  } else {
    // Asymptote slopes: roots of c m^2 + 2b m + a = 0, taken without cancellation.
    red.case_tag = ReductionCase::Asymptote;
    const double root = std::sqrt(-disc);
    double m_plus = 0.0;
    double m_minus = 0.0;
    if (qf.b >= 0.0) {
      const double q = -(qf.b + root);
      m_minus = q / qf.c;
      m_plus = qf.a / q;
    } else {
      const double q = -qf.b + root;
      m_plus = q / qf.c;
      m_minus = qf.a / q;
    }
    m = {{{1.0, 1.0}, {m_plus, m_minus}}};
    red.phi = invert(m);
  }

  red.kappa = substitute_quadratic(qf, m)[1];
  red.jacobian = std::abs(det(red.phi));
  red.residual = {qf.d * m[0][0] + qf.e * m[1][0], qf.d * m[0][1] + qf.e * m[1][1], qf.g};
  return red;
}

LinearPiece transport_piece(const StandardReduction& red, const QuadraticForm& qf,
                            const LinearPiece& uv_piece) {
  const auto& p = red.phi;
  return {red.kappa * (uv_piece.alpha * p[0][0] + uv_piece.beta * p[1][0]) + qf.d,
          red.kappa * (uv_piece.alpha * p[0][1] + uv_piece.beta * p[1][1]) + qf.e,
          red.kappa * uv_piece.gamma + qf.g};
}

LinearPiece translate_piece(const LinearPiece& l, const QuadraticForm& qf, Point t) {
  // gradient d' = d + 2 Q t, constant beta' = beta - t'Qt + c't - d't
  const Point qt{qf.a * t.x + qf.b * t.y, qf.b * t.x + qf.c * t.y};
  const double tqt = dot(t, qt);
  const double ct = qf.d * t.x + qf.e * t.y;
  const double dt = l.alpha * t.x + l.beta * t.y;
  return {l.alpha + 2.0 * qt.x, l.beta + 2.0 * qt.y, l.gamma - tqt + ct - dt};
}

LinearPiece point_reflect_piece(const LinearPiece& l, const QuadraticForm& qf) {
  return {2.0 * qf.d - l.alpha, 2.0 * qf.e - l.beta, l.gamma};
}

LinearPiece axis_reflect_piece(const LinearPiece& l, Axis axis) {
  if (axis == Axis::X) return {-l.alpha, l.beta, -l.gamma};
  return {l.alpha, -l.beta, -l.gamma};
}

Point pe_motion(Point p, double m) {
  if (m == 0.0) throw Error(ErrorKind::ZeroParameter, "pE-motion parameter must be nonzero");
  return {m * p.x, p.y / m};
}

Triangle pe_motion(const Triangle& tri, double m) {
  return {pe_motion(tri.v1, m), pe_motion(tri.v2, m), pe_motion(tri.v3, m)};
}

double pe_normalize(const Triangle& tri) {
  const double scale = std::max({std::abs(tri.v2.x), std::abs(tri.v2.y), std::abs(tri.v3.x),
                                 std::abs(tri.v3.y), 1.0});
  if (std::abs(tri.v1.x) > 1e-12 * scale || std::abs(tri.v1.y) > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidParameter, "vertex 1 must be at the origin");
  }
  const double k2 = tri.v2.x * tri.v2.y;
  const double k3 = tri.v3.x * tri.v3.y;
  if (std::abs(k2 - k3) > 1e-9 * std::max(1.0, std::abs(k2))) {
    throw Error(ErrorKind::NotOnCommonHyperbola,
                "x2*y2 = " + fmt17(k2) + " differs from x3*y3 = " + fmt17(k3));
  }
  if (tri.v2.x <= 0.0 || tri.v3.y <= 0.0 || k2 <= 0.0) {
    throw Error(ErrorKind::NotFirstQuadrant, "vertices 2 and 3 must lie in the open first quadrant");
  }
  return std::sqrt(tri.v3.y / tri.v2.x);
}

std::string to_json(const QuadraticForm& qf) {
  std::ostringstream os;
  os << "{\"a\":" << fmt17(qf.a) << ",\"b\":" << fmt17(qf.b) << ",\"c\":" << fmt17(qf.c)
     << ",\"d\":" << fmt17(qf.d) << ",\"e\":" << fmt17(qf.e) << ",\"g\":" << fmt17(qf.g) << "}";
  return os.str();
}

std::string to_json(const StandardReduction& red) {
  std::ostringstream os;
  os << "{\"phi\":[" << fmt17(red.phi[0][0]) << "," << fmt17(red.phi[0][1]) << ","
     << fmt17(red.phi[1][0]) << "," << fmt17(red.phi[1][1]) << "],\"kappa\":" << fmt17(red.kappa)
     << ",\"jacobian\":" << fmt17(red.jacobian) << ",\"case\":\""
     << reduction_case_name(red.case_tag) << "\",\"residual\":{\"alpha\":"
     << fmt17(red.residual.alpha) << ",\"beta\":" << fmt17(red.residual.beta)
     << ",\"gamma\":" << fmt17(red.residual.gamma) << "}}";
  return os.str();
}

QuadraticForm quadratic_form_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    QuadraticForm qf;
    qf.a = j.value("a", 0.0);
    qf.b = j.value("b", 0.0);
    qf.c = j.value("c", 0.0);
    qf.d = j.value("d", 0.0);
    qf.e = j.value("e", 0.0);
    qf.g = j.value("g", 0.0);
    return qf;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, ex.what());
  }
}

}  // namespace saddle
