#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "saddle/error.hpp"
#include "saddle/optimizer.hpp"
#include "saddle/tiling.hpp"

using namespace saddle;

namespace {

template <typename Fn>
ErrorKind error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

Tiling optimal_tiling(ApproxKind kind, double window, double eps = 1.0) {
  return build_tiling(optimal_triangle({kind, eps}), window);
}

double surface(Point p) { return p.x * p.y; }

bool inside(const Box& b, const Triangle& t) {
  return b.contains(t.v1) && b.contains(t.v2) && b.contains(t.v3);
}

// Independent spread of values at shared lattice vertices, keyed by the
// lattice coordinates recovered from positions.
double vertex_spread(const Tiling& t) {
  std::map<std::pair<long, long>, std::pair<double, double>> seen;
  for (const PlacedFacet& f : t.facets) {
    for (Point v : f.triangle.vertices()) {
      const Point st = t.lattice_coords(v);
      const std::pair<long, long> key{std::lround(st.x), std::lround(st.y)};
      const double value = f.piece(v);
      auto [it, fresh] = seen.try_emplace(key, value, value);
      if (!fresh) {
        it->second.first = std::min(it->second.first, value);
        it->second.second = std::max(it->second.second, value);
      }
    }
  }
  double worst = 0.0;
  for (const auto& [key, range] : seen) worst = std::max(worst, range.second - range.first);
  return worst;
}

}  // namespace

TEST_CASE("facet count brackets window area over triangle area") {
  for (ApproxKind kind : kAllKinds) {
    CAPTURE(kind_name(kind));
    for (double window : {10.0, 30.0, 60.0}) {
      const Tiling t = optimal_tiling(kind, window);
      const double area = optimal_triangle({kind, 1.0}).area;
      std::size_t full = 0;
      for (const PlacedFacet& f : t.facets) full += inside(t.window(), f.triangle) ? 1 : 0;
      CHECK(static_cast<double>(full) <= window * window / area);
      CHECK(static_cast<double>(t.facets.size()) >= window * window / area);
      for (const PlacedFacet& f : t.facets) CHECK(intersects(f.triangle, t.window()));
    }
  }
  CHECK(optimal_tiling(ApproxKind::General, 0.01).facets.size() >= 1);
}

TEST_CASE("facet layout") {
  const Tiling t = optimal_tiling(ApproxKind::General, 25.0);
  const double area = t.base.area();
  for (std::size_t n = 0; n < t.facets.size(); ++n) {
    const PlacedFacet& f = t.facets[n];
    CHECK(f.local_index == n);
    CHECK(f.triangle.area() == doctest::Approx(area).epsilon(1e-12));
    CHECK(t.find(f.lattice_index, f.orientation) == &f);
    if (n > 0) {
      const PlacedFacet& g = t.facets[n - 1];
      CHECK(std::make_tuple(g.lattice_index.i, g.lattice_index.j, g.orientation) <
            std::make_tuple(f.lattice_index.i, f.lattice_index.j, f.orientation));
    }
    // Original cells are translates of the base; reflected ones are its point reflection.
    const Point t0 = t.lattice_point(f.lattice_index.i, f.lattice_index.j) - t.base.v1;
    if (f.orientation == Orientation::Original) {
      CHECK(std::abs(f.triangle.v1.x - (t.base.v1.x + t0.x)) <= 1e-9);
      CHECK(std::abs(f.triangle.v2.y - (t.base.v2.y + t0.y)) <= 1e-9);
    } else {
      const Point far = t.base.v1 + t.e2() + t.e3() + t0;
      CHECK(std::abs(f.triangle.v1.x - far.x) <= 1e-9);
      CHECK(std::abs(f.triangle.v1.y - far.y) <= 1e-9);
    }
    const auto lv = facet_lattice_vertices(f);
    for (int r = 0; r < 3; ++r) {
      const Point p = t.lattice_point(lv[r].i, lv[r].j);
      const Point q = f.triangle.vertices()[r];
      CHECK(std::hypot(p.x - q.x, p.y - q.y) <= 1e-9);
    }
  }
}

TEST_CASE("planes reproduce the deviations") {
  for (ApproxKind kind : kAllKinds) {
    CAPTURE(kind_name(kind));
    const Tiling t = optimal_tiling(kind, 20.0);
    for (const PlacedFacet& f : t.facets) {
      const auto v = f.triangle.vertices();
      CHECK(std::abs(f.piece(v[0]) - surface(v[0]) - f.deviations.d1) <= 1e-10 * std::max(1.0, std::abs(surface(v[0]))));
      CHECK(std::abs(f.piece(v[1]) - surface(v[1]) - f.deviations.d2) <= 1e-10 * std::max(1.0, std::abs(surface(v[1]))));
      CHECK(std::abs(f.piece(v[2]) - surface(v[2]) - f.deviations.d3) <= 1e-10 * std::max(1.0, std::abs(surface(v[2]))));
    }
  }
}

TEST_CASE("max_error_over_window") {
  CHECK(max_error_over_window(optimal_tiling(ApproxKind::General, 30.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_error_over_window(optimal_tiling(ApproxKind::Interpolation, 30.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_error_over_window(optimal_tiling(ApproxKind::ContinuousUnder, 30.0, 0.5)) ==
        doctest::Approx(0.5).epsilon(1e-9));

  const OptimalSolution g = optimal_triangle({ApproxKind::General, 1.0});
  const Triangle half{0.5 * g.vertices.v1, 0.5 * g.vertices.v2, 0.5 * g.vertices.v3};
  const Deviations quarter{g.deviations.d1 / 4, g.deviations.d2 / 4, g.deviations.d3 / 4};
  CHECK(max_error_over_window(build_tiling(half, quarter, 10.0)) ==
        doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("pointwise error stays below the window maximum") {
  std::mt19937_64 rng(8);
  for (ApproxKind kind : kAllKinds) {
    CAPTURE(kind_name(kind));
    const Tiling t = optimal_tiling(kind, 20.0);
    const double bound = max_error_over_window(t);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    double worst = 0.0;
    for (int i = 0; i < 100000 / 7; ++i) {
      const Point p{u(rng), u(rng)};
      worst = std::max(worst, std::abs(pwl_eval(t, p) - surface(p)));
    }
    CHECK(worst <= bound + 1e-9);
    CHECK(worst >= 0.5 * bound);
  }
}

TEST_CASE("facets partition the window") {
  const Tiling t = optimal_tiling(ApproxKind::Overestimation, 20.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int n = 0; n < 10000; ++n) {
    const Point p{u(rng), u(rng)};
    int covering = 0, strictly = 0;
    for (const PlacedFacet& f : t.facets) {
      const auto w = f.triangle.barycentric(p);
      const double m = std::min({w[0], w[1], w[2]});
      covering += m >= -1e-10;
      strictly += m > 1e-9;
    }
    CHECK(covering >= 1);
    CHECK(strictly <= 1);
  }
}

TEST_CASE("pwl_eval") {
  const Tiling t = optimal_tiling(ApproxKind::General, 20.0);
  SUBCASE("interior point") {
    const PlacedFacet& f = t.facets[t.facets.size() / 2];
    const Point c = f.triangle.at(1.0 / 3, 1.0 / 3, 1.0 / 3);
    if (t.window().contains(c)) {
      CHECK(&containing_facet(t, c) == &f);
      CHECK(pwl_eval(t, c) == f.piece(c));
    }
  }
  SUBCASE("shared edge goes to the smaller local index") {
    int checked = 0;
    for (const PlacedFacet& f : t.facets) {
      if (f.orientation != Orientation::Reflected) continue;
      const PlacedFacet* g = t.find(f.lattice_index, Orientation::Original);
      if (g == nullptr) continue;
      // The diagonal v2 v3 of the cell is shared by both halves.
      const Point mid = g->triangle.at(0, 0.5, 0.5);
      if (!t.window().contains(mid)) continue;
      CHECK(containing_facet(t, mid).local_index == std::min(f.local_index, g->local_index));
      ++checked;
    }
    CHECK(checked > 0);
  }
  SUBCASE("continuous tilings do not care which facet decides") {
    const Tiling c = optimal_tiling(ApproxKind::Continuous, 20.0);
    for (const PlacedFacet& f : c.facets) {
      const Point mid = f.triangle.at(0.5, 0.5, 0);
      if (!c.window().contains(mid)) continue;
      CHECK(std::abs(pwl_eval(c, mid) - f.piece(mid)) <= 1e-9 * std::max(1.0, std::abs(f.piece(mid))));
    }
  }
}

TEST_CASE("density") {
  const Tiling t = optimal_tiling(ApproxKind::General, 400.0);
  const double want = optimal_triangle({ApproxKind::General, 1.0}).density;
  CHECK(std::abs(density_estimate(t, 200.0) - want) / want <= 0.05);
  double last = 1e300;
  for (double ell : {25.0, 50.0, 100.0, 200.0, 400.0}) {
    const double residual = std::abs(density_estimate(t, ell) - want);
    CHECK(residual < last);
    last = residual;
  }

  // Right isosceles legs sqrt(8 eps) with constant deviation eps: the
  // hypotenuse error is eps - 2 eps = -eps, density 1 / (4 eps).
  for (double eps : {1.0, 0.25}) {
    const double leg = std::sqrt(8 * eps);
    const Triangle grid{{0, 0}, {leg, 0}, {0, leg}};
    const Tiling g = build_tiling(grid, {eps, eps, eps}, 200.0);
    CHECK(max_error_over_window(g) == doctest::Approx(eps).epsilon(1e-9));
    CHECK(std::abs(density_estimate(g, 200.0) * 4 * eps - 1.0) <= 0.05);
  }
}

TEST_CASE("continuity") {
  for (ApproxKind kind : {ApproxKind::Continuous, ApproxKind::ContinuousOver,
                          ApproxKind::ContinuousUnder, ApproxKind::Interpolation}) {
    CAPTURE(kind_name(kind));
    const Tiling t = optimal_tiling(kind, 20.0);
    const ContinuityReport r = continuity_report(t);
    CHECK(r.max_vertex_jump <= 1e-9);
    CHECK(r.max_edge_jump <= 1e-9);
    CHECK(vertex_spread(t) <= 1e-9);
  }
  const Tiling g = optimal_tiling(ApproxKind::General, 20.0);
  CHECK(continuity_report(g).max_vertex_jump == doctest::Approx(16.0 / 9).epsilon(1e-9));
  CHECK(continuity_report(g).max_edge_jump <= 1e-9);
  CHECK(vertex_spread(g) == doctest::Approx(16.0 / 9).epsilon(1e-9));
  for (ApproxKind kind : {ApproxKind::Overestimation, ApproxKind::Underestimation}) {
    const Tiling t = optimal_tiling(kind, 20.0);
    CHECK(continuity_report(t).max_vertex_jump == doctest::Approx(8.0 / 9).epsilon(1e-9));
    CHECK(vertex_spread(t) == doctest::Approx(8.0 / 9).epsilon(1e-9));
  }
}

TEST_CASE("tiling errors") {
  const OptimalSolution g = optimal_triangle({ApproxKind::General, 1.0});
  CHECK(error_of([] { build_tiling(Triangle{{0, 0}, {1, 1}, {2, 2}}, {}, 10.0); }) ==
        ErrorKind::DegenerateBase);
  CHECK(error_of([&] { build_tiling(g, 1e9); }) == ErrorKind::WindowTooLarge);
  CHECK(error_of([&] { build_tiling(g, -1.0); }) == ErrorKind::InvalidParameter);
  TilingOptions small;
  small.max_facets = 10;
  CHECK(error_of([&] { build_tiling(g, 50.0, small); }) == ErrorKind::WindowTooLarge);

  const Tiling t = build_tiling(g, 10.0);
  CHECK(error_of([&] { pwl_eval(t, {6.0, 0.0}); }) == ErrorKind::OutsideWindow);
  CHECK(error_of([&] { density_estimate(t, 11.0); }) == ErrorKind::WindowExceeded);
  CHECK(error_of([&] { density_estimate(t, 0.0); }) == ErrorKind::InvalidParameter);
}
