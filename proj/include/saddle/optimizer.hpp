#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddle/geometry.hpp"
#include "saddle/triangle_error.hpp"

namespace saddle {

enum class ApproxKind {
  General,
  Continuous,
  Interpolation,
  Overestimation,
  Underestimation,
  ContinuousOver,
  ContinuousUnder,
};

inline constexpr std::array<ApproxKind, 7> kAllKinds = {
    ApproxKind::General,         ApproxKind::Continuous,     ApproxKind::Interpolation,
    ApproxKind::Overestimation,  ApproxKind::Underestimation, ApproxKind::ContinuousOver,
    ApproxKind::ContinuousUnder,
};

std::string_view kind_name(ApproxKind kind);
/// Accepts the CLI spellings (general, continuous, interpolation, over, under,
/// continuous-over, continuous-under, plus a few aliases).
std::optional<ApproxKind> parse_kind(std::string_view text);

struct ApproximationSpec {
  ApproxKind kind = ApproxKind::General;
  double epsilon = 1.0;

  double emin() const;
  double emax() const;
  double sigma() const { return emax() - emin(); }
  /// All three deviations are forced equal.
  bool constant_deviation() const;
  bool interpolation() const { return kind == ApproxKind::Interpolation; }
};

struct SlackPair {
  double a = 0.0;  // sqrt(emax - d)
  double b = 0.0;  // sqrt(d - emin)
};

struct BoxEndpoints {
  double p12 = 0.0;
  double p13 = 0.0;
  double p23 = 0.0;
  double q = 0.0;
};

enum class BoxVertexType { A, B, C, D, E };
char box_vertex_label(BoxVertexType t);

struct BoxVertexResult {
  double value = 0.0;  // 4 A^2
  BoxVertexType type = BoxVertexType::A;
  std::array<double, 3> k{};
};

struct CertificateGap {
  double gap = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
};

struct OptimalSolution {
  ApproxKind kind = ApproxKind::General;
  double epsilon = 1.0;
  double area = 0.0;
  double density = 0.0;
  Deviations deviations;
  double k_ascending = 0.0;
  double k_descending = 0.0;  // negative: -w
  double lambda_ascending = 0.0;
  double lambda_descending = 0.0;
  Triangle vertices;
  double aspect_ratio = 0.0;
};

SlackPair slack_from_deviation(double d, double emin, double emax);
BoxEndpoints box_endpoints(double a1, double a2, double a3, double sigma);

/// 4 A^2 of any triangle with one vertex at the origin and these edge products.
double area_sq_from_k(double k1, double k2, double k3);

/// Triangle (0,0), (t, k1/t), (s, k2/s) with s the smaller root of the
/// realizability quadratic.
Triangle realize_triangle(double k1, double k2, double k3, double t);

double type_a_objective(double a1, double a2, double a3, double sigma);
CertificateGap certificate_gap(double a, double b, double sigma);
BoxVertexResult box_vertex_enumerate(double a1, double a2, double a3, double sigma);

/// Largest area of a constant-deviation triangle for the symmetric error band [-eps, eps].
double continuous_area(double delta, double epsilon);

OptimalSolution optimal_triangle(const ApproximationSpec& spec);

std::string to_json(const OptimalSolution& sol);

// ---- oracles ------------------------------------------------------------

struct ReducedOracleResult {
  double area = 0.0;
  double value = 0.0;                  // best 4 A^2
  std::array<double, 3> slacks{};      // (a1, a2, a3) at the argmax
  std::array<std::size_t, 3> index{};  // grid indices of the argmax
  std::optional<double> delta;         // constant-deviation kinds only
  BoxVertexType type = BoxVertexType::A;
};

/// Exhaustive grid over the slack cube (or over the constant deviation for
/// continuous kinds). Parallel over the first axis with a deterministic merge.
ReducedOracleResult brute_force_reduced(const ApproximationSpec& spec, std::size_t grid_n);

struct GeometricOracleOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t refine_seeds = 16;
  std::size_t refine_iterations = 40'000;
};

struct GeometricOracleResult {
  double area = 0.0;
  Triangle triangle;
  Deviations deviations;
  std::size_t feasible_samples = 0;
};

/// Random search straight over vertex coordinates and deviations with the
/// exact triangle error as feasibility test. Any returned area is realized by
/// a feasible triangle, so it is a lower bound on the optimum.
GeometricOracleResult brute_force_geometric(const ApproximationSpec& spec,
                                            const GeometricOracleOptions& opts);
double brute_force_geometric(const ApproximationSpec& spec, std::size_t samples,
                             std::uint64_t seed);

/// Feasibility of (triangle, deviations) for an approximation class.
bool geometric_feasible(const ApproximationSpec& spec, const Triangle& tri, const Deviations& dev);

/// Points shared by (x - p1)(y - q1) = k and (x - p2)(y - q2) = k, sorted by x.
std::vector<Point> hyperbola_intersections(Point u1, Point u2, double kstar);

}  // namespace saddle
