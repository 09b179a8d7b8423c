#include "saddle/verification.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "saddle/error.hpp"
#include "saddle/format.hpp"
#include "saddle/optimizer.hpp"
#include "saddle/quadform.hpp"
#include "saddle/tiling.hpp"
#include "saddle/triangle_error.hpp"

namespace saddle {

namespace {

// Reference values are written out from their radicals here, independently of
// the optimizer, so a slip in either place shows up as a mismatch.
struct Reference {
  ApproxKind kind;
  double area;
  double k;
  double d1;
  double d23;
  double lambda1;
  double lambda3;
};

std::vector<Reference> reference_table(double tamper) {
  const double r3 = std::sqrt(3.0);
  const double r5 = std::sqrt(5.0);
  const double f = 1.0 + tamper;
  return {
      {ApproxKind::General, f * 32.0 * r3 / 9.0, 32.0 / 9.0, -1.0, 7.0 / 9.0, 0.75, 0.5},
      {ApproxKind::Continuous, f * 8.0 * r3 / 3.0, 8.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.5, 0.5},
      {ApproxKind::Interpolation, f * 2.0 * r5, 4.0, 0.0, 0.0, 0.5, 0.5},
      {ApproxKind::Overestimation, f * 16.0 * r3 / 9.0, 16.0 / 9.0, 0.0, 8.0 / 9.0, 0.75, 0.5},
      {ApproxKind::Underestimation, f * 16.0 * r3 / 9.0, 16.0 / 9.0, -1.0, -1.0 / 9.0, 0.75, 0.5},
      {ApproxKind::ContinuousOver, f * 4.0 * r3 / 3.0, 4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 0.5, 0.5},
      {ApproxKind::ContinuousUnder, f * 4.0 * r3 / 3.0, 4.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 0.5,
       0.5},
  };
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

struct Context {
  bool full = false;
  double tamper = 0.0;
};

using CheckFn = bool (*)(const Context&, Detail&);

bool check_table1(const Context& ctx, Detail& out) {
  double worst = 0.0;
  for (const Reference& ref : reference_table(ctx.tamper)) {
    const OptimalSolution sol = optimal_triangle({ref.kind, 1.0});
    worst = std::max({worst, rel_err(sol.area, ref.area), rel_err(sol.density, 1.0 / ref.area)});
  }
  out << "max relative deviation " << fmt17(worst);
  return worst <= 1e-12;
}

bool check_table2(const Context& ctx, Detail& out) {
  double worst = 0.0;
  for (const Reference& ref : reference_table(ctx.tamper)) {
    const OptimalSolution sol = optimal_triangle({ref.kind, 1.0});
    const double f = 1.0 + ctx.tamper;
    worst = std::max({worst, std::abs(sol.k_ascending - f * ref.k),
                      std::abs(sol.deviations.d1 - ref.d1), std::abs(sol.deviations.d2 - ref.d23),
                      std::abs(sol.deviations.d3 - ref.d23),
                      std::abs(sol.lambda_ascending - ref.lambda1),
                      std::abs(sol.lambda_descending - ref.lambda3)});
  }
  out << "max abs deviation " << fmt17(worst);
  return worst <= 1e-12;
}

bool check_reduced_oracle(const Context& ctx, Detail& out) {
  const std::size_t n = ctx.full ? 1000 : 200;
  bool ok = true;
  double worst_area = 0.0;
  double worst_arg = 0.0;
  for (ApproxKind kind :
       {ApproxKind::General, ApproxKind::Overestimation, ApproxKind::Underestimation}) {
    for (double sigma : {1.0, 2.0}) {
      const double eps = kind == ApproxKind::General ? sigma / 2.0 : sigma;
      const ReducedOracleResult r = brute_force_reduced({kind, eps}, n);
      const double want = (1.0 + ctx.tamper) * 16.0 * std::sqrt(3.0) * sigma / 9.0;
      const double rs = std::sqrt(sigma);
      const double h = rs / static_cast<double>(n - 1);
      const double arg = std::max({std::abs(r.slacks[0] - rs), std::abs(r.slacks[1] - rs / 3.0),
                                   std::abs(r.slacks[2] - rs / 3.0)}) / h;
      worst_area = std::max(worst_area, rel_err(r.area, want));
      worst_arg = std::max(worst_arg, arg);
      ok = ok && rel_err(r.area, want) <= 1e-4 && arg <= 1.0 && r.type == BoxVertexType::A;
    }
  }
  out << "grid " << n << ", area rel " << fmt17(worst_area) << ", argmax off by "
      << fmt17(worst_arg) << " cells";
  return ok;
}

bool check_geometric_oracle(const Context& ctx, Detail& out) {
  GeometricOracleOptions opts;
  opts.samples = ctx.full ? 1'000'000 : 100'000;
  opts.seed = 20240611;
  const double want = (1.0 + ctx.tamper) * 32.0 * std::sqrt(3.0) / 9.0;
  const GeometricOracleResult g = brute_force_geometric({ApproxKind::General, 1.0}, opts);
  bool ok = g.area <= want + 1e-6 && g.area >= 0.99 * want &&
            geometric_feasible({ApproxKind::General, 1.0}, g.triangle, g.deviations);
  out << "general " << fmt17(g.area / want);

  // Upper-bound property for the remaining classes with a lighter search.
  GeometricOracleOptions light = opts;
  light.samples = opts.samples / 10;
  light.refine_seeds = 4;
  light.refine_iterations = 10'000;
  for (const Reference& ref : reference_table(ctx.tamper)) {
    if (ref.kind == ApproxKind::General) continue;
    const double a = brute_force_geometric({ref.kind, 1.0}, light).area;
    ok = ok && a <= ref.area + 1e-6;
    out << ", " << kind_name(ref.kind) << " " << fmt17(a / ref.area);
  }
  return ok;
}

bool check_certificates(const Context& ctx, Detail& out) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n_cert = ctx.full ? 1'000'000 : 100'000;
  const std::size_t n_box = ctx.full ? 100'000 : 20'000;
  double worst_id = 0.0;
  double worst_term = 0.0;
  for (std::size_t i = 0; i < n_cert; ++i) {
    const double sigma = i % 2 == 0 ? 1.0 : 2.0;
    const double rs = std::sqrt(sigma);
    const double a = rs * unit(rng);
    const double b = rs * unit(rng);
    const CertificateGap c = certificate_gap(a, b, sigma);
    // Relative to the size of the bound so the zero-gap optimum is measured sensibly.
    const double scale = 1024.0 * sigma * sigma / 27.0;
    worst_id = std::max(worst_id, std::abs(c.gap - c.term1 - c.term2) / scale);
    worst_term = std::min({worst_term, c.term1, c.term2});
  }
  double worst_excess = -1e300;
  for (std::size_t i = 0; i < n_box; ++i) {
    const double sigma = i % 2 == 0 ? 1.0 : 2.0;
    const double rs = std::sqrt(sigma);
    const double a1 = rs * unit(rng), a2 = rs * unit(rng), a3 = rs * unit(rng);
    const BoxEndpoints e = box_endpoints(a1, a2, a3, sigma);
    const double bound = (1.0 - ctx.tamper) * 1024.0 * sigma * sigma / 27.0;
    for (double k1 : {e.p12, 0.0}) {
      for (double k2 : {e.p13, 0.0}) {
        for (double k3 : {-e.q, e.p23}) {
          const double s = k1 + k2 - k3;
          worst_excess = std::max(worst_excess, s * s - 4.0 * k1 * k2 - bound);
        }
      }
    }
  }
  out << "identity rel " << fmt17(worst_id) << ", min term " << fmt17(worst_term)
      << ", max 4A^2 - bound " << fmt17(worst_excess);
  return worst_id <= 1e-10 && worst_term >= -1e-12 && worst_excess <= 1e-9;
}

bool check_tightness(const Context& ctx, Detail& out) {
  bool ok = true;
  double worst = 0.0;
  for (const Reference& ref : reference_table(ctx.tamper)) {
    for (double eps : {1.0, 0.3}) {
      const ApproximationSpec spec{ref.kind, eps};
      const OptimalSolution sol = optimal_triangle(spec);
      const double err = max_abs_error_triangle(sol.vertices, sol.deviations);
      worst = std::max(worst, std::abs(err - (1.0 + ctx.tamper) * eps));
      ok = ok && std::abs(err - (1.0 + ctx.tamper) * eps) <= 1e-9;
      const auto edges = analyze_edges(sol.vertices, sol.deviations);
      for (int e = 0; e < 3; ++e) {
        const bool ascending = e < 2;
        const double lam = ascending ? ref.lambda1 : ref.lambda3;
        const double bound = ascending ? spec.emax() : spec.emin();
        const EdgeAnalysis& ea = edges[e];
        ok = ok && ea.lambda_star && ea.extremal_error && std::abs(*ea.lambda_star - lam) <= 1e-9 &&
             std::abs(*ea.extremal_error - bound) <= 1e-9;
      }
    }
  }
  out << "max | error - eps | " << fmt17(worst);
  return ok;
}

bool check_tiling_density(const Context& ctx, Detail& out) {
  const OptimalSolution sol = optimal_triangle({ApproxKind::General, 1.0});
  const Tiling t = build_tiling(sol, 400.0);
  const double want = (1.0 + ctx.tamper) * 3.0 * std::sqrt(3.0) / 32.0;
  double prev = 1e300;
  bool monotone = true;
  double last = 0.0;
  for (double ell : {50.0, 100.0, 200.0, 400.0}) {
    const double est = density_estimate(t, ell);
    const double residual = std::abs(est - want);
    monotone = monotone && residual < prev;
    prev = residual;
    last = est;
    out << "l=" << ell << ": " << fmt17(est) << "  ";
  }
  const double rel = rel_err(last, want);
  out << "rel at 400 " << fmt17(rel);
  return rel <= 0.02 && monotone;
}

bool check_continuity(const Context& ctx, Detail& out) {
  bool ok = true;
  for (ApproxKind kind : {ApproxKind::Continuous, ApproxKind::Interpolation,
                          ApproxKind::ContinuousOver, ApproxKind::ContinuousUnder}) {
    const ContinuityReport r = continuity_report(build_tiling(optimal_triangle({kind, 1.0}), 20.0));
    ok = ok && r.max_vertex_jump <= 1e-10 && r.max_edge_jump <= 1e-10;
    out << kind_name(kind) << " (" << fmt17(r.max_vertex_jump) << ", " << fmt17(r.max_edge_jump)
        << ")  ";
  }
  for (double eps : {1.0, 0.25}) {
    const ContinuityReport r =
        continuity_report(build_tiling(optimal_triangle({ApproxKind::General, eps}), 20.0));
    const double want = (1.0 + ctx.tamper) * 16.0 * eps / 9.0;
    ok = ok && std::abs(r.max_vertex_jump - want) <= 1e-9;
    out << "general eps=" << eps << " jump " << fmt17(r.max_vertex_jump) << "  ";
  }
  return ok;
}

bool check_invariance(const Context& ctx, Detail& out) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto pt = [&] { return Point{u(rng), u(rng)}; };
  auto rel = [](double x, double y) {
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
  };
  const double f = 1.0 + ctx.tamper;
  double worst = 0.0;
  double worst_pe = 0.0;
  const QuadraticForm xy = QuadraticForm::bilinear();
  for (int n = 0; n < 1000; ++n) {
    const QuadraticForm qf{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const LinearPiece l{u(rng), u(rng), u(rng)};
    const Point t = pt();
    const Point p = pt();
    const LinearPiece lt = translate_piece(l, qf, t);
    worst = std::max(worst, rel(f * (qf(p + t) - lt(p + t)), qf(p) - l(p)));
    const LinearPiece lr = point_reflect_piece(l, qf);
    worst = std::max(worst, rel(f * (qf(-p) - lr(-p)), qf(p) - l(p)));

    const LinearPiece lx = axis_reflect_piece(l, Axis::X);
    const LinearPiece ly = axis_reflect_piece(l, Axis::Y);
    const double e0 = std::abs(xy(p) - l(p));
    worst = std::max(worst, rel(f * std::abs(xy({p.x, -p.y}) - lx({p.x, -p.y})), e0));
    worst = std::max(worst, rel(f * std::abs(xy({-p.x, p.y}) - ly({-p.x, p.y})), e0));

    // pE-motion: deviations are unchanged, so the exact triangle error is too.
    const Triangle tri{pt(), pt(), pt()};
    if (tri.is_degenerate()) continue;
    const double m = std::exp(u(rng) / 2.0);
    const Triangle moved = pe_motion(tri, m);
    const Deviations dev{u(rng) / 3.0, u(rng) / 3.0, u(rng) / 3.0};
    const LinearPiece plane = plane_from_deviations(tri, dev);
    const LinearPiece moved_plane = plane_from_deviations(moved, dev);
    const Point q = tri.at(0.2, 0.3, 0.5);
    const Point mq = pe_motion(q, m);
    worst = std::max(worst, rel(f * (xy(mq) - moved_plane(mq)), xy(q) - plane(q)));
    worst = std::max(worst, rel(f * max_abs_error_triangle(moved, dev),
                                max_abs_error_triangle(tri, dev)));
    const auto k0 = edge_products(tri);
    const auto k1 = edge_products(moved);
    for (int e = 0; e < 3; ++e) worst_pe = std::max(worst_pe, rel(f * k1[e], k0[e]));
    worst_pe = std::max(worst_pe, rel(f * moved.area(), tri.area()));
  }
  out << "error identities " << fmt17(worst) << ", pE products/area " << fmt17(worst_pe);
  return worst <= 1e-9 && worst_pe <= 1e-12;
}

bool check_reduction(const Context& ctx, Detail& out) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const OptimalSolution sol = optimal_triangle({ApproxKind::General, 1.0});
  const LinearPiece uv_plane = plane_from_deviations(sol.vertices, sol.deviations);
  const int grid = ctx.full ? 60 : 25;
  double worst_coef = 0.0;
  double worst_excess = -1e300;
  int made = 0;
  int cases[4] = {0, 0, 0, 0};
  while (made < 100) {
    QuadraticForm qf{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    if (made % 10 == 1) qf.a = 0.0;
    if (made % 10 == 2) qf.c = 0.0;
    if (made % 10 == 3) qf.a = qf.c = 0.0;
    if (!(discriminant(qf) < -1e-3)) continue;
    const StandardReduction red = reduce_to_standard(qf);
    ++cases[static_cast<int>(red.case_tag)];
    const Point c0 = red.inverse({1.0, 0.0});
    const Point c1 = red.inverse({0.0, 1.0});
    const Matrix2 m{{{c0.x, c1.x}, {c0.y, c1.y}}};
    const auto coef = substitute_quadratic(qf, m);
    const double mmax = std::max({std::abs(c0.x), std::abs(c0.y), std::abs(c1.x), std::abs(c1.y)});
    const double scale = std::max({std::abs(qf.a), std::abs(qf.b), std::abs(qf.c)}) *
                         std::max(1.0, mmax * mmax);
    worst_coef = std::max({worst_coef, std::abs(coef[0]) / scale, std::abs(coef[2]) / scale});

    const LinearPiece piece = transport_piece(red, qf, uv_plane);
    const Triangle tx{red.inverse(sol.vertices.v1), red.inverse(sol.vertices.v2),
                      red.inverse(sol.vertices.v3)};
    const double bound = (1.0 - ctx.tamper) * std::abs(red.kappa) * sol.epsilon;
    const double tol = 1e-8 * std::max(1.0, bound);
    for (int i = 0; i <= grid; ++i) {
      for (int j = 0; j <= grid - i; ++j) {
        const double w2 = static_cast<double>(i) / grid;
        const double w3 = static_cast<double>(j) / grid;
        const Point p = tx.at(1.0 - w2 - w3, w2, w3);
        worst_excess = std::max(worst_excess, std::abs(qf(p) - piece(p)) - bound - tol);
      }
    }
    ++made;
  }
  out << "u^2/v^2 rel " << fmt17(worst_coef) << ", max excess " << fmt17(worst_excess)
      << ", cases " << cases[0] << "/" << cases[1] << "/" << cases[2] << "/" << cases[3];
  return worst_coef <= 1e-12 && worst_excess <= 0.0;
}

bool check_ratios(const Context& ctx, Detail& out) {
  const double r3 = std::sqrt(3.0);
  const double r5 = std::sqrt(5.0);
  const auto area = [](ApproxKind k) { return optimal_triangle({k, 1.0}).area; };
  const auto density = [](ApproxKind k) { return optimal_triangle({k, 1.0}).density; };
  const double f = 1.0 + ctx.tamper;
  const double ratio = area(ApproxKind::General) / area(ApproxKind::Continuous);
  const double gain_g = 1.0 - density(ApproxKind::General) / density(ApproxKind::Interpolation);
  const double gain_c = 1.0 - density(ApproxKind::Continuous) / density(ApproxKind::Interpolation);
  const double want_g = f * (1.0 - (3.0 * r3 / 32.0) / (1.0 / (2.0 * r5)));
  const double want_c = f * (1.0 - (r3 / 8.0) / (1.0 / (2.0 * r5)));
  out << "area ratio " << fmt17(ratio) << ", general gain " << fmt17(gain_g)
      << ", continuous gain " << fmt17(gain_c);
  return std::abs(ratio - f * 4.0 / 3.0) <= 1e-6 && std::abs(gain_g - want_g) <= 1e-6 &&
         std::abs(gain_c - want_c) <= 1e-6 && std::abs(gain_g - 0.274) <= 5e-4 &&
         std::abs(gain_c - 0.032) <= 5e-4;
}

struct NamedCheck {
  const char* name;
  CheckFn fn;
};

constexpr NamedCheck kChecks[] = {
    {"table1-areas", check_table1},
    {"table2-parameters", check_table2},
    {"reduced-oracle", check_reduced_oracle},
    {"geometric-oracle", check_geometric_oracle},
    {"certificates", check_certificates},
    {"tightness", check_tightness},
    {"tiling-density", check_tiling_density},
    {"continuity", check_continuity},
    {"invariance", check_invariance},
    {"reduction", check_reduction},
    {"comparison-ratios", check_ratios},
};

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const NamedCheck& c : kChecks) names.emplace_back(c.name);
  return names;
}

std::vector<CheckResult> run_checks(const VerifyOptions& opts) {
  const Context ctx{opts.level == VerifyLevel::Full, opts.tamper};
  std::vector<CheckResult> results;
  for (const NamedCheck& c : kChecks) {
    CheckResult r;
    r.name = c.name;
    Detail detail;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.passed = c.fn(ctx, detail);
      r.detail = detail.str();
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.on_result) opts.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CheckResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return std::string(r.passed ? "PASS " : "FAIL ") + r.name + " (" + secs + " s) " + r.detail;
}

}  // namespace saddle
