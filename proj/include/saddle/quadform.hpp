#pragma once

// Quadratic forms a x^2 + 2b xy + c y^2 + d x + e y + g and the
// transformations that leave the L-infinity error of a linear piece unchanged.

#include <array>
#include <string>

#include "saddle/geometry.hpp"

namespace saddle {

struct QuadraticForm {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double g = 0.0;

  /// The standard saddle xy.
  static constexpr QuadraticForm bilinear() { return {0.0, 0.5, 0.0, 0.0, 0.0, 0.0}; }

  double operator()(Point p) const {
    return a * p.x * p.x + 2.0 * b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + g;
  }
};

/// Affine function alpha x + beta y + gamma.
struct LinearPiece {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double operator()(Point p) const { return alpha * p.x + beta * p.y + gamma; }
  friend bool operator==(const LinearPiece&, const LinearPiece&) = default;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class ReductionCase { BilinearOnly, ShearA, ShearC, Asymptote };

const char* reduction_case_name(ReductionCase c);

/// Linear change of variables (u, v) = phi (x, y) under which the quadratic
/// part of a form becomes kappa * u v. The linear part of the source form,
/// rewritten in (u, v), is kept in `residual` (gamma carries g).
struct StandardReduction {
  Matrix2 phi{};
  double kappa = 0.0;
  double jacobian = 0.0;
  ReductionCase case_tag = ReductionCase::BilinearOnly;
  LinearPiece residual;

  Point forward(Point p) const {
    return {phi[0][0] * p.x + phi[0][1] * p.y, phi[1][0] * p.x + phi[1][1] * p.y};
  }
  Point inverse(Point q) const;
};

/// Coefficients of the quadratic part after substituting (x, y) = M (u, v):
/// returns (u^2, uv, v^2) coefficients.
std::array<double, 3> substitute_quadratic(const QuadraticForm& qf, const Matrix2& m);

double evaluate(const QuadraticForm& qf, Point p);
double discriminant(const QuadraticForm& qf);

StandardReduction reduce_to_standard(const QuadraticForm& qf);

/// Carries a linear piece approximating u v over a triangle in (u, v)
/// coordinates to a piece approximating the source form in (x, y). The error
/// is multiplied by kappa pointwise.
LinearPiece transport_piece(const StandardReduction& red, const QuadraticForm& qf,
                            const LinearPiece& uv_piece);

LinearPiece translate_piece(const LinearPiece& l, const QuadraticForm& qf, Point t);
LinearPiece point_reflect_piece(const LinearPiece& l, const QuadraticForm& qf);

enum class Axis { X, Y };
LinearPiece axis_reflect_piece(const LinearPiece& l, Axis axis);

Point pe_motion(Point p, double m);
Triangle pe_motion(const Triangle& tri, double m);
double pe_normalize(const Triangle& tri);

std::string to_json(const QuadraticForm& qf);
std::string to_json(const StandardReduction& red);
QuadraticForm quadratic_form_from_json(const std::string& text);

}  // namespace saddle
