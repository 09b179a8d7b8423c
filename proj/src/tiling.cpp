#include "saddle/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "saddle/error.hpp"
#include "saddle/format.hpp"
#include "saddle/parallel.hpp"

namespace saddle {

Point Tiling::lattice_point(std::int64_t i, std::int64_t j) const {
  const Point a = e2();
  const Point b = e3();
  const double di = static_cast<double>(i);
  const double dj = static_cast<double>(j);
  return {base.v1.x + di * a.x + dj * b.x, base.v1.y + di * a.y + dj * b.y};
}

Point Tiling::lattice_coords(Point p) const {
  const Point a = e2();
  const Point b = e3();
  const Point r = p - base.v1;
  const double det = cross(a, b);
  return {cross(r, b) / det, cross(a, r) / det};
}

const PlacedFacet* Tiling::find(LatticeIndex idx, Orientation o) const {
  const std::int64_t di = idx.i - i0_;
  const std::int64_t dj = idx.j - j0_;
  if (di < 0 || dj < 0 || di >= ni_ || dj >= nj_) return nullptr;
  const std::int64_t slot = slots_[static_cast<std::size_t>((di * nj_ + dj) * 2 +
                                                            (o == Orientation::Reflected))];
  return slot < 0 ? nullptr : &facets[static_cast<std::size_t>(slot)];
}

void Tiling::reindex() {
  slots_.clear();
  ni_ = nj_ = 0;
  if (facets.empty()) return;
  std::int64_t imin = facets[0].lattice_index.i, imax = imin;
  std::int64_t jmin = facets[0].lattice_index.j, jmax = jmin;
  for (const PlacedFacet& f : facets) {
    imin = std::min(imin, f.lattice_index.i);
    imax = std::max(imax, f.lattice_index.i);
    jmin = std::min(jmin, f.lattice_index.j);
    jmax = std::max(jmax, f.lattice_index.j);
  }
  i0_ = imin;
  j0_ = jmin;
  ni_ = imax - imin + 1;
  nj_ = jmax - jmin + 1;
  slots_.assign(static_cast<std::size_t>(ni_ * nj_ * 2), -1);
  for (std::size_t n = 0; n < facets.size(); ++n) {
    const PlacedFacet& f = facets[n];
    const std::int64_t di = f.lattice_index.i - i0_;
    const std::int64_t dj = f.lattice_index.j - j0_;
    slots_[static_cast<std::size_t>((di * nj_ + dj) * 2 +
                                    (f.orientation == Orientation::Reflected))] =
        static_cast<std::int64_t>(n);
  }
}

std::array<LatticeIndex, 3> facet_lattice_vertices(const PlacedFacet& f) {
  const std::int64_t i = f.lattice_index.i;
  const std::int64_t j = f.lattice_index.j;
  if (f.orientation == Orientation::Original) {
    return {LatticeIndex{i, j}, LatticeIndex{i + 1, j}, LatticeIndex{i, j + 1}};
  }
  return {LatticeIndex{i + 1, j + 1}, LatticeIndex{i, j + 1}, LatticeIndex{i + 1, j}};
}

Tiling build_tiling(const Triangle& base, const Deviations& dev, double window,
                    const TilingOptions& opts) {
  if (base.is_degenerate()) throw Error(ErrorKind::DegenerateBase, "base triangle has no area");
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw Error(ErrorKind::InvalidParameter, "window must be positive");
  }

  Tiling t;
  t.base = base;
  t.deviations = dev;
  t.window_half = 0.5 * window;
  const auto d = dev.as_array();
  t.emin = opts.emin.value_or(std::min({d[0], d[1], d[2]}));
  t.emax = opts.emax.value_or(std::max({d[0], d[1], d[2]}));

  // Every facet meeting the window lies in the window grown by the facet diameter.
  const double diam = std::sqrt(base.bbox_diagonal_sq());
  const double grown = window + 2.0 * diam;
  const double estimate = grown * grown / base.area();
  if (estimate > static_cast<double>(opts.max_facets)) {
    throw Error(ErrorKind::WindowTooLarge,
                "about " + fmt17(std::round(estimate)) + " facets exceed the cap of " +
                    std::to_string(opts.max_facets));
  }

  const Box box = t.window();
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  double tmin = smin, tmax = smax;
  for (Point c : {box.lo, Point{box.hi.x, box.lo.y}, box.hi, Point{box.lo.x, box.hi.y}}) {
    const Point st = t.lattice_coords(c);
    smin = std::min(smin, st.x);
    smax = std::max(smax, st.x);
    tmin = std::min(tmin, st.y);
    tmax = std::max(tmax, st.y);
  }
  const auto i_lo = static_cast<std::int64_t>(std::floor(smin)) - 1;
  const auto i_hi = static_cast<std::int64_t>(std::ceil(smax)) + 1;
  const auto j_lo = static_cast<std::int64_t>(std::floor(tmin)) - 1;
  const auto j_hi = static_cast<std::int64_t>(std::ceil(tmax)) + 1;
  const auto rows = static_cast<std::size_t>(i_hi - i_lo + 1);

  const QuadraticForm xy = QuadraticForm::bilinear();
  const LinearPiece plane = plane_from_deviations(base, dev);
  const LinearPiece reflected = point_reflect_piece(plane, xy);
  const Point shift_r = 2.0 * base.v1 + t.e2() + t.e3();

  const std::size_t workers = worker_count();
  std::vector<std::vector<PlacedFacet>> parts(std::max<std::size_t>(1, std::min(workers, rows)));
  parallel_blocks(rows, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    std::vector<PlacedFacet>& out = parts[w];
    for (std::size_t r = begin; r < end; ++r) {
      const std::int64_t i = i_lo + static_cast<std::int64_t>(r);
      for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const Point shift = t.lattice_point(i, j) - base.v1;
        PlacedFacet f;
        f.lattice_index = {i, j};
        f.deviations = dev;

        f.orientation = Orientation::Original;
        f.triangle = {t.lattice_point(i, j), t.lattice_point(i + 1, j), t.lattice_point(i, j + 1)};
        if (intersects(f.triangle, box)) {
          f.piece = translate_piece(plane, xy, shift);
          out.push_back(f);
        }

        f.orientation = Orientation::Reflected;
        f.triangle = {t.lattice_point(i + 1, j + 1), t.lattice_point(i, j + 1),
                      t.lattice_point(i + 1, j)};
        if (intersects(f.triangle, box)) {
          f.piece = translate_piece(reflected, xy, shift_r + shift);
          out.push_back(f);
        }
      }
    }
  });

  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  if (total > opts.max_facets) {
    throw Error(ErrorKind::WindowTooLarge, std::to_string(total) + " facets exceed the cap");
  }
  t.facets.reserve(total);
  for (auto& p : parts) {
    for (PlacedFacet& f : p) {
      f.local_index = t.facets.size();
      t.facets.push_back(f);
    }
  }
  t.reindex();
  return t;
}

Tiling build_tiling(const OptimalSolution& sol, double window, TilingOptions opts) {
  const ApproximationSpec spec{sol.kind, sol.epsilon};
  if (!opts.emin) opts.emin = spec.emin();
  if (!opts.emax) opts.emax = spec.emax();
  return build_tiling(sol.vertices, sol.deviations, window, opts);
}

const PlacedFacet& containing_facet(const Tiling& tiling, Point p) {
  if (!tiling.window().contains(p)) {
    throw Error(ErrorKind::OutsideWindow,
                "(" + fmt17(p.x) + ", " + fmt17(p.y) + ") is outside the window");
  }
  const Point st = tiling.lattice_coords(p);
  const auto i = static_cast<std::int64_t>(std::floor(st.x));
  const auto j = static_cast<std::int64_t>(std::floor(st.y));

  const PlacedFacet* best = nullptr;
  const PlacedFacet* nearest = nullptr;
  double nearest_margin = -std::numeric_limits<double>::infinity();
  for (std::int64_t di = -1; di <= 1; ++di) {
    for (std::int64_t dj = -1; dj <= 1; ++dj) {
      for (Orientation o : {Orientation::Original, Orientation::Reflected}) {
        const PlacedFacet* f = tiling.find({i + di, j + dj}, o);
        if (f == nullptr) continue;
        const auto w = f->triangle.barycentric(p);
        const double margin = std::min({w[0], w[1], w[2]});
        if (margin >= -1e-10 && (best == nullptr || f->local_index < best->local_index)) {
          best = f;
        }
        if (margin > nearest_margin) {
          nearest_margin = margin;
          nearest = f;
        }
      }
    }
  }
  if (best != nullptr) return *best;
  if (nearest != nullptr) return *nearest;
  throw Error(ErrorKind::OutsideWindow, "no facet covers the point");
}

double pwl_eval(const Tiling& tiling, Point p) { return containing_facet(tiling, p).piece(p); }

double max_error_over_window(const Tiling& tiling) {
  const Box box = tiling.window();
  auto inside = [&](const PlacedFacet& f) {
    return box.contains(f.triangle.v1) && box.contains(f.triangle.v2) &&
           box.contains(f.triangle.v3);
  };
  const bool any_inside = std::any_of(tiling.facets.begin(), tiling.facets.end(), inside);
  double worst = 0.0;
  for (const PlacedFacet& f : tiling.facets) {
    if (any_inside && !inside(f)) continue;
    const Deviations d = deviations_from_plane(f.triangle, f.piece);
    worst = std::max(worst, max_abs_error_triangle(f.triangle, d));
  }
  return worst;
}

double density_estimate(const Tiling& tiling, double ell) {
  if (!(ell > 0.0)) throw Error(ErrorKind::InvalidParameter, "ell must be positive");
  if (ell > 2.0 * tiling.window_half * (1.0 + 1e-12)) {
    throw Error(ErrorKind::WindowExceeded,
                "ell " + fmt17(ell) + " exceeds the window " + fmt17(2.0 * tiling.window_half));
  }
  const Box q = Box::centered(0.5 * ell);
  std::size_t count = 0;
  for (const PlacedFacet& f : tiling.facets) count += intersects(f.triangle, q) ? 1 : 0;
  return static_cast<double>(count) / (ell * ell);
}

namespace {

struct Spread {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  int hits = 0;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++hits;
  }
};

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 4>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

ContinuityReport continuity_report(const Tiling& tiling) {
  std::unordered_map<std::array<std::int64_t, 4>, Spread, KeyHash> vertices, edges;
  for (const PlacedFacet& f : tiling.facets) {
    const auto keys = facet_lattice_vertices(f);
    for (const LatticeIndex& k : keys) {
      vertices[{k.i, k.j, 0, 0}].add(f.piece(tiling.lattice_point(k.i, k.j)));
    }
    for (int e = 0; e < 3; ++e) {
      LatticeIndex a = keys[e];
      LatticeIndex b = keys[(e + 1) % 3];
      if (b.i < a.i || (b.i == a.i && b.j < a.j)) std::swap(a, b);
      const Point pa = tiling.lattice_point(a.i, a.j);
      const Point pb = tiling.lattice_point(b.i, b.j);
      edges[{a.i, a.j, b.i, b.j}].add(f.piece(0.5 * (pa + pb)));
    }
  }
  ContinuityReport r;
  for (const auto& [k, s] : vertices) {
    if (s.hits > 1) r.max_vertex_jump = std::max(r.max_vertex_jump, s.hi - s.lo);
  }
  for (const auto& [k, s] : edges) {
    if (s.hits > 1) r.max_edge_jump = std::max(r.max_edge_jump, s.hi - s.lo);
  }
  return r;
}

}  // namespace saddle
