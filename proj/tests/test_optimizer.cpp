#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "saddle/error.hpp"
#include "saddle/optimizer.hpp"

using namespace saddle;

namespace {

const double kR3 = std::sqrt(3.0);
const double kR5 = std::sqrt(5.0);

double rel(double x, double y) { return std::abs(x - y) / std::max({1e-300, std::abs(y)}); }

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

}  // namespace

TEST_CASE("approximation classes") {
  const ApproximationSpec g{ApproxKind::General, 2.0};
  CHECK(g.emin() == -2.0);
  CHECK(g.emax() == 2.0);
  CHECK(g.sigma() == 4.0);
  CHECK(ApproximationSpec{ApproxKind::Overestimation, 1}.emin() == 0.0);
  CHECK(ApproximationSpec{ApproxKind::Underestimation, 1}.emax() == 0.0);
  CHECK(ApproximationSpec{ApproxKind::ContinuousUnder, 1}.sigma() == 1.0);
  CHECK(ApproximationSpec{ApproxKind::Interpolation, 1}.constant_deviation());
  CHECK(!ApproximationSpec{ApproxKind::Overestimation, 1}.constant_deviation());
  for (ApproxKind k : kAllKinds) CHECK(parse_kind(kind_name(k)) == k);
  CHECK(parse_kind("over") == ApproxKind::Overestimation);
  CHECK(parse_kind("Continuous_Under") == ApproxKind::ContinuousUnder);
  CHECK(!parse_kind("hexagonal"));
}

TEST_CASE("slack_from_deviation") {
  const SlackPair top = slack_from_deviation(1.0, -1.0, 1.0);
  CHECK(top.a == 0.0);
  CHECK(top.b == doctest::Approx(std::sqrt(2.0)));
  const SlackPair bottom = slack_from_deviation(-1.0, -1.0, 1.0);
  CHECK(bottom.a == doctest::Approx(std::sqrt(2.0)));
  CHECK(bottom.b == 0.0);
  const SlackPair mid = slack_from_deviation(7.0 / 9.0, -1.0, 1.0);
  CHECK(mid.a == doctest::Approx(std::sqrt(2.0) / 3.0));
  CHECK(mid.b == doctest::Approx(4.0 / 3.0));
  CHECK(mid.a * mid.a + mid.b * mid.b == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(error_of([] { slack_from_deviation(1.5, -1, 1); }) == ErrorKind::DeviationOutOfRange);
}

TEST_CASE("box_endpoints") {
  for (double sigma : {1.0, 2.0, 0.3}) {
    const double rs = std::sqrt(sigma);
    const BoxEndpoints w = box_endpoints(rs, std::sqrt(sigma / 9), std::sqrt(sigma / 9), sigma);
    CHECK(w.p12 == doctest::Approx(16 * sigma / 9));
    CHECK(w.p13 == doctest::Approx(16 * sigma / 9));
    CHECK(w.q == doctest::Approx(32 * sigma / 9));
    const BoxEndpoints zero = box_endpoints(0, 0, 0, sigma);
    CHECK(zero.p12 == 0.0);
    CHECK(zero.p23 == 0.0);
    CHECK(zero.q == doctest::Approx(4 * sigma));
    const BoxEndpoints full = box_endpoints(rs, rs, rs, sigma);
    CHECK(full.p13 == doctest::Approx(4 * sigma));
    CHECK(std::abs(full.q) <= 1e-15);
  }
  CHECK(error_of([] { box_endpoints(2.0, 0, 0, 1.0); }) == ErrorKind::SlackOutOfRange);
  CHECK(error_of([] { box_endpoints(0, -0.1, 0, 1.0); }) == ErrorKind::SlackOutOfRange);
}

TEST_CASE("area_sq_from_k") {
  for (double sigma : {1.0, 2.0}) {
    CHECK(area_sq_from_k(16 * sigma / 9, 16 * sigma / 9, -32 * sigma / 9) ==
          doctest::Approx(1024 * sigma * sigma / 27));
  }
  const double k1 = 2.0, k2 = 3.0;
  CHECK(std::abs(area_sq_from_k(k1, k2, k1 + k2 + 2 * std::sqrt(k1 * k2))) <= 1e-12);
  CHECK(std::abs(area_sq_from_k(k1, k2, k1 + k2 - 2 * std::sqrt(k1 * k2))) <= 1e-12);
  const BoxEndpoints b = box_endpoints(1, 1, 1, 2);
  CHECK(area_sq_from_k(b.p12, b.p13, b.p23) == doctest::Approx(-48.0));
}

TEST_CASE("Type B vertex closed form") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double sigma = i % 2 ? 1.0 : 2.0;
    const double rs = std::sqrt(sigma);
    const double a1 = rs * u(rng), a2 = rs * u(rng), a3 = rs * u(rng);
    const BoxEndpoints b = box_endpoints(a1, a2, a3, sigma);
    const double want = -16 * a1 * a2 * a3 * (a1 + a2 + a3);
    CHECK(std::abs(area_sq_from_k(b.p12, b.p13, b.p23) - want) <=
          1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("realize_triangle") {
  SUBCASE("general optimum") {
    const double k = 32.0 / 9.0;
    const double x2 = 4.0 / 3.0 * (1 + kR3);
    const double y2 = 4.0 / 3.0 * (kR3 - 1);
    const Triangle t = realize_triangle(k, k, -2 * k, x2);
    CHECK(t.v2.x == doctest::Approx(x2));
    CHECK(t.v2.y == doctest::Approx(y2));
    CHECK(t.v3.x == doctest::Approx(y2));
    CHECK(t.v3.y == doctest::Approx(x2));
  }
  SUBCASE("k = (1, 1, -2), t = 1") {
    const Triangle t = realize_triangle(1, 1, -2, 1);
    CHECK(t.v3.x == doctest::Approx(2 - kR3));
    const auto k = edge_products(t);
    CHECK(k[0] == doctest::Approx(1));
    CHECK(k[1] == doctest::Approx(1));
    CHECK(k[2] == doctest::Approx(-2));
  }
  SUBCASE("round trip and the other root") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    int done = 0;
    while (done < 100) {
      const double k1 = u(rng), k2 = u(rng), k3 = 4 * (u(rng) - 2.5), t = u(rng);
      const double disc = area_sq_from_k(k1, k2, k3);
      if (disc <= 1e-3) continue;
      ++done;
      const Triangle tri = realize_triangle(k1, k2, k3, t);
      const auto k = edge_products(tri);
      CHECK(rel(k[0], k1) <= 1e-10);
      CHECK(rel(k[1], k2) <= 1e-10);
      CHECK(std::abs(k[2] - k3) <= 1e-10 * std::max(1.0, std::abs(k3)));
      CHECK(rel(4 * tri.area() * tri.area(), disc) <= 1e-9);
      // Larger root from Vieta: s1 s2 = k2 t^2 / k1.
      const double s_big = k2 * t * t / (k1 * tri.v3.x);
      CHECK(s_big >= tri.v3.x);
      const Triangle other{{0, 0}, tri.v2, {s_big, k2 / s_big}};
      CHECK(rel(other.area(), tri.area()) <= 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK(error_of([] { realize_triangle(1, 1, 4, 1); }) == ErrorKind::UnrealizableProducts);
    CHECK(error_of([] { realize_triangle(1, 1, -2, 0); }) == ErrorKind::InvalidParameter);
    CHECK(error_of([] { realize_triangle(-1, 1, -2, 1); }) == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("type_a_objective") {
  for (double sigma : {1.0, 2.0}) {
    const double rs = std::sqrt(sigma);
    CHECK(type_a_objective(rs, rs / 3, rs / 3, sigma) == doctest::Approx(1024 * sigma * sigma / 27));
    CHECK(type_a_objective(rs, rs, rs, sigma) == doctest::Approx(0.0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double a = rs * u(rng), b = rs * u(rng);
      CHECK(type_a_objective(a, b, b, sigma) ==
            doctest::Approx(16 * (sigma - b * b) * (sigma + a * a + 2 * a * b)));
    }
  }
}

TEST_CASE("certificate_gap") {
  for (double sigma : {1.0, 2.0}) {
    const double rs = std::sqrt(sigma);
    const CertificateGap opt = certificate_gap(rs, rs / 3, sigma);
    CHECK(std::abs(opt.gap) <= 1e-12);
    CHECK(std::abs(opt.term1) <= 1e-12);
    CHECK(std::abs(opt.term2) <= 1e-12);

    // b = 0: both sides evaluated by hand give 1024/27 - 16 = 592/27 and
    // term1 = (32/27) * sigma * 5 * sigma = 160/27 sigma^2, term2 = 0 at a = sqrt(sigma).
    const CertificateGap b0 = certificate_gap(rs, 0, sigma);
    CHECK(b0.gap == doctest::Approx(1024 * sigma * sigma / 27 - 16 * sigma * 2 * sigma));
    CHECK(b0.term1 == doctest::Approx(160 * sigma * sigma / 27));
    CHECK(std::abs(b0.term2) <= 1e-12);
    CHECK(b0.gap == doctest::Approx(b0.term1 + b0.term2));

    const CertificateGap zero = certificate_gap(0, 0, sigma);
    CHECK(zero.gap == doctest::Approx(592 * sigma * sigma / 27));
    CHECK(zero.term1 + zero.term2 == doctest::Approx(592 * sigma * sigma / 27));
  }
  CHECK(error_of([] { certificate_gap(0, 1.5, 2.0); }) == ErrorKind::SlackOutOfRange);
}

TEST_CASE("certificate identity on random slacks") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, lowest = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double sigma = i % 2 ? 1.0 : 2.0;
    const double rs = std::sqrt(sigma);
    const CertificateGap c = certificate_gap(rs * u(rng), rs * u(rng), sigma);
    worst = std::max(worst, std::abs(c.gap - c.term1 - c.term2) / (1024 * sigma * sigma / 27));
    lowest = std::min({lowest, c.term1, c.term2});
  }
  CHECK(worst <= 1e-10);
  CHECK(lowest >= -1e-12);
}

TEST_CASE("symmetric split is never worse") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double sigma = i % 2 ? 1.0 : 2.0;
    const double rs = std::sqrt(sigma);
    const double a1 = rs * u(rng);
    const double mean = rs * (0.01 + 0.98 * u(rng));
    const double h = std::min(mean, rs - mean) * (0.01 + 0.99 * u(rng));
    CHECK(type_a_objective(a1, mean + h, mean - h, sigma) <
          type_a_objective(a1, mean, mean, sigma));
  }
}

TEST_CASE("box vertices never beat the bound") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const double sigma = i % 2 ? 1.0 : 2.0;
    const double rs = std::sqrt(sigma);
    const BoxVertexResult r = box_vertex_enumerate(rs * u(rng), rs * u(rng), rs * u(rng), sigma);
    REQUIRE(r.value <= 1024 * sigma * sigma / 27 + 1e-9);
  }
}

TEST_CASE("box_vertex_enumerate") {
  const double sigma = 2.0, rs = std::sqrt(sigma);
  const BoxVertexResult w = box_vertex_enumerate(rs, rs / 3, rs / 3, sigma);
  CHECK(w.type == BoxVertexType::A);
  CHECK(box_vertex_label(w.type) == 'A');
  CHECK(w.value == doctest::Approx(1024 * sigma * sigma / 27));
  CHECK(w.k[0] == doctest::Approx(16 * sigma / 9));
  CHECK(w.k[2] == doctest::Approx(-32 * sigma / 9));

  const BoxVertexResult b = box_vertex_enumerate(1, 1, 1, 2);
  CHECK(b.type != BoxVertexType::B);
  CHECK(b.value > -48.0);

  // The grid argmax is a Type A vertex.
  const int n = 50;
  double best = -1;
  BoxVertexType type = BoxVertexType::E;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const BoxVertexResult r =
            box_vertex_enumerate(rs * i / (n - 1), rs * j / (n - 1), rs * k / (n - 1), sigma);
        if (r.value > best) {
          best = r.value;
          type = r.type;
        }
      }
  CHECK(type == BoxVertexType::A);
}

TEST_CASE("continuous_area") {
  CHECK(continuous_area(1.0 / 3.0, 1.0) == doctest::Approx(8 * kR3 / 3));
  CHECK(continuous_area(2.0 / 3.0, 2.0) == doctest::Approx(2 * 8 * kR3 / 3));
  CHECK(continuous_area(0.0, 1.0) == doctest::Approx(2 * kR5));
  CHECK(continuous_area(-1.0, 1.0) == 0.0);
  CHECK(error_of([] { continuous_area(1.5, 1.0); }) == ErrorKind::OutOfRange);
  // Its maximum over delta sits at eps / 3.
  double best = -1, arg = 0;
  for (int i = 0; i <= 30000; ++i) {
    const double d = -1.0 + 2.0 * i / 30000.0;
    if (continuous_area(d, 1.0) > best) {
      best = continuous_area(d, 1.0);
      arg = d;
    }
  }
  CHECK(arg == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("optimal_triangle examples") {
  SUBCASE("general") {
    const OptimalSolution s = optimal_triangle({ApproxKind::General, 1.0});
    CHECK(s.area == doctest::Approx(32 * kR3 / 9).epsilon(1e-14));
    CHECK(s.area == doctest::Approx(6.1584).epsilon(1e-4));
    CHECK(s.density == doctest::Approx(3 * kR3 / 32).epsilon(1e-14));
    CHECK(s.deviations.d1 == doctest::Approx(-1));
    CHECK(s.deviations.d2 == doctest::Approx(7.0 / 9));
    CHECK(s.deviations.d3 == doctest::Approx(7.0 / 9));
    CHECK(s.k_ascending == doctest::Approx(32.0 / 9));
    CHECK(s.k_descending == doctest::Approx(-64.0 / 9));
    CHECK(s.lambda_ascending == doctest::Approx(0.75));
    CHECK(s.lambda_descending == doctest::Approx(0.5));
    CHECK(s.vertices.v2.x == doctest::Approx(4.0 / 3 * (1 + kR3)));
    CHECK(s.vertices.v2.y == doctest::Approx(4.0 / 3 * (kR3 - 1)));
  }
  SUBCASE("interpolation") {
    const OptimalSolution s = optimal_triangle({ApproxKind::Interpolation, 1.0});
    CHECK(s.area == doctest::Approx(2 * kR5));
    CHECK(s.k_ascending == doctest::Approx(4));
    CHECK(s.deviations == Deviations{0, 0, 0});
    CHECK(s.lambda_ascending == 0.5);
  }
  SUBCASE("continuous-over") {
    const OptimalSolution s = optimal_triangle({ApproxKind::ContinuousOver, 1.0});
    CHECK(s.area == doctest::Approx(4 * kR3 / 3));
    CHECK(s.deviations.d1 == doctest::Approx(2.0 / 3));
    CHECK(s.k_ascending == doctest::Approx(4.0 / 3));
  }
  SUBCASE("underestimation") {
    const OptimalSolution s = optimal_triangle({ApproxKind::Underestimation, 1.0});
    CHECK(s.deviations.d1 == doctest::Approx(-1));
    CHECK(s.deviations.d2 == doctest::Approx(-1.0 / 9));
    CHECK(s.k_ascending == doctest::Approx(16.0 / 9));
    CHECK(s.area == doctest::Approx(16 * kR3 / 9));
  }
  CHECK(error_of([] { optimal_triangle({ApproxKind::General, 0.0}); }) == ErrorKind::InvalidEpsilon);
  CHECK(error_of([] { optimal_triangle({ApproxKind::General, -1.0}); }) == ErrorKind::InvalidEpsilon);
}

TEST_CASE("optimal_triangle invariants for every class") {
  for (ApproxKind kind : kAllKinds) {
    CAPTURE(kind_name(kind));
    const OptimalSolution one = optimal_triangle({kind, 1.0});
    for (double eps : {1.0, 0.01, 3.0, 250.0}) {
      const OptimalSolution s = optimal_triangle({kind, eps});
      CHECK(s.density * s.area == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(std::abs(max_abs_error_triangle(s.vertices, s.deviations) - eps) <= 1e-9 * eps);
      const auto k = edge_products(s.vertices);
      CHECK(rel(k[0], s.k_ascending) <= 1e-12);
      CHECK(rel(k[1], s.k_ascending) <= 1e-12);
      CHECK(rel(k[2], s.k_descending) <= 1e-12);
      CHECK(rel(s.vertices.area(), s.area) <= 1e-12);
      CHECK(s.vertices.v2.x > s.vertices.v2.y);
      CHECK(s.vertices.v2.y > 0.0);
      // eps scaling: area linear, coordinates by sqrt(eps).
      CHECK(rel(s.area, eps * one.area) <= 1e-12);
      CHECK(rel(s.vertices.v2.x, std::sqrt(eps) * one.vertices.v2.x) <= 1e-12);
      CHECK(rel(s.vertices.v2.y, std::sqrt(eps) * one.vertices.v2.y) <= 1e-12);
    }
    const double want = kind == ApproxKind::Interpolation ? (3 + kR5) / 2 : 2 + kR3;
    CHECK(rel(one.aspect_ratio, want) <= 1e-10);
    CHECK(rel(one.vertices.v2.x / one.vertices.v2.y, want) <= 1e-10);
  }
}

TEST_CASE("optimal solution json") {
  const auto j = nlohmann::json::parse(to_json(optimal_triangle({ApproxKind::General, 1.0})));
  for (const char* key : {"kind", "epsilon", "area", "density", "deviations", "k_ascending",
                          "k_descending", "lambda_ascending", "lambda_descending", "vertices",
                          "aspect_ratio"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["kind"] == "general");
  CHECK(j["area"].get<double>() == optimal_triangle({ApproxKind::General, 1.0}).area);
  CHECK(j["vertices"].size() == 3);
  CHECK(j["deviations"].size() == 3);
}

TEST_CASE("hyperbola_intersections") {
  const double k = 32.0 / 9.0;
  CHECK(hyperbola_intersections({0, 0}, {3, 0}, k).empty());
  CHECK(error_of([] { hyperbola_intersections({1, 1}, {1, 1}, 1.0); }) ==
        ErrorKind::IdenticalCenters);

  auto on_both = [&](Point p, Point u1, Point u2) {
    CHECK(std::abs((p.x - u1.x) * (p.y - u1.y) - k) <= 1e-10 * std::max(1.0, k));
    CHECK(std::abs((p.x - u2.x) * (p.y - u2.y) - k) <= 1e-10 * std::max(1.0, k));
  };
  // (0,0) and (1,1): x^2 - x + 32/9 = 0 has no real root.
  for (Point p : hyperbola_intersections({0, 0}, {1, 1}, k)) on_both(p, {0, 0}, {1, 1});
  CHECK(hyperbola_intersections({0, 0}, {1, 1}, k).empty());
  const auto pts = hyperbola_intersections({0, 0}, {1, -1}, k);
  CHECK(pts.size() == 2);
  for (Point p : pts) on_both(p, {0, 0}, {1, -1});
  CHECK(hyperbola_intersections({0, 0}, {0, 2}, k).empty());

  const auto sym = hyperbola_intersections({0, 0}, {1, -2}, k);
  CHECK(sym.size() <= 2);
  for (Point p : sym) on_both(p, {0, 0}, {1, -2});

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    for (Point p : hyperbola_intersections(a, b, k)) {
      const double scale = std::max({1.0, std::abs(p.x), std::abs(p.y)});
      CHECK(std::abs((p.x - a.x) * (p.y - a.y) - k) <= 1e-9 * scale * scale);
      CHECK(std::abs((p.x - b.x) * (p.y - b.y) - k) <= 1e-9 * scale * scale);
    }
  }
}
