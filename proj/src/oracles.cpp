#include <algorithm>
#include <cmath>
#include <random>

#include "saddle/optimizer.hpp"
#include "saddle/parallel.hpp"

namespace saddle {

namespace {

struct GridBest {
  double value = -1.0;
  std::array<std::size_t, 3> index{};
  BoxVertexType type = BoxVertexType::A;
  bool found = false;
};

// Same vertex order as box_vertex_enumerate: k1 in {P12, 0}, k2 in {P13, 0},
// k3 in {-Q, P23}, outermost first.
inline void scan_vertices(double p12, double p13, double p23, double q, std::size_t i1,
                          std::size_t i2, std::size_t i3, GridBest& best) {
  const double s_a = p12 + p13 + q;
  const double s_b = p12 + p13 - p23;
  const double v[8] = {
      s_a * s_a - 4.0 * p12 * p13, s_b * s_b - 4.0 * p12 * p13,
      (p12 + q) * (p12 + q),       (p12 - p23) * (p12 - p23),
      (p13 + q) * (p13 + q),       (p13 - p23) * (p13 - p23),
      q * q,                       p23 * p23,
  };
  static constexpr BoxVertexType types[8] = {
      BoxVertexType::A, BoxVertexType::B, BoxVertexType::C, BoxVertexType::D,
      BoxVertexType::C, BoxVertexType::D, BoxVertexType::E, BoxVertexType::E,
  };
  for (int t = 0; t < 8; ++t) {
    if (!best.found || v[t] > best.value) {
      best.value = v[t];
      best.index = {i1, i2, i3};
      best.type = types[t];
      best.found = true;
    }
  }
}

ReducedOracleResult reduced_constant(const ApproximationSpec& spec, std::size_t grid_n) {
  const double emin = spec.emin();
  const double emax = spec.emax();
  const double sigma = spec.sigma();
  ReducedOracleResult res;
  bool have = false;
  auto consider = [&](double delta, std::size_t i) {
    const double a = std::sqrt(std::max(0.0, emax - delta));
    const BoxVertexResult r = box_vertex_enumerate(a, a, a, sigma);
    if (!have || r.value > res.value) {
      res.value = r.value;
      res.type = r.type;
      res.slacks = {a, a, a};
      res.index = {i, i, i};
      res.delta = delta;
      have = true;
    }
  };
  if (spec.interpolation()) {
    consider(0.0, 0);
  } else {
    for (std::size_t i = 0; i < grid_n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(grid_n - 1);
      consider(i + 1 == grid_n ? emax : emin + t * sigma, i);
    }
  }
  res.area = 0.5 * std::sqrt(std::max(0.0, res.value));
  return res;
}

}  // namespace

ReducedOracleResult brute_force_reduced(const ApproximationSpec& spec, std::size_t grid_n) {
  if (grid_n < 2) grid_n = 2;
  if (spec.constant_deviation()) return reduced_constant(spec, grid_n);

  const double sigma = spec.sigma();
  const double rs = std::sqrt(sigma);
  std::vector<double> a(grid_n), b(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    a[i] = i + 1 == grid_n ? rs : rs * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    b[i] = std::sqrt(std::max(0.0, sigma - a[i] * a[i]));
  }

  const std::size_t workers = worker_count();
  std::vector<GridBest> partial(std::max<std::size_t>(1, std::min(workers, grid_n)));
  parallel_blocks(grid_n, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    GridBest best;
    for (std::size_t i1 = begin; i1 < end; ++i1) {
      for (std::size_t i2 = 0; i2 < grid_n; ++i2) {
        const double s12 = a[i1] + a[i2];
        const double p12 = s12 * s12;
        for (std::size_t i3 = 0; i3 < grid_n; ++i3) {
          const double s13 = a[i1] + a[i3];
          const double s23 = a[i2] + a[i3];
          const double sq = b[i2] + b[i3];
          scan_vertices(p12, s13 * s13, s23 * s23, sq * sq, i1, i2, i3, best);
        }
      }
    }
    partial[w] = best;
  });

  // Blocks are contiguous in i1, so keeping the earlier block on ties keeps
  // the lexicographically smallest argmax.
  GridBest best;
  for (const GridBest& p : partial) {
    if (p.found && (!best.found || p.value > best.value)) best = p;
  }
  ReducedOracleResult res;
  res.value = best.value;
  res.index = best.index;
  res.slacks = {a[best.index[0]], a[best.index[1]], a[best.index[2]]};
  res.type = best.type;
  res.area = 0.5 * std::sqrt(std::max(0.0, best.value));
  return res;
}

bool geometric_feasible(const ApproximationSpec& spec, const Triangle& tri, const Deviations& dev) {
  if (tri.is_degenerate()) return false;
  const double emin = spec.emin();
  const double emax = spec.emax();
  const double slack = feasibility_slack(emin, emax);
  if (spec.constant_deviation() && !(dev.d1 == dev.d2 && dev.d2 == dev.d3)) return false;
  if (spec.interpolation() && dev.d1 != 0.0) return false;
  for (const EdgeAnalysis& ea : analyze_edges(tri, dev)) {
    if (ea.min_error < emin - slack || ea.max_error > emax + slack) return false;
  }
  return true;
}

namespace {

// Search point: log-coordinates of v2 and v3 (v1 sits at the origin) and the
// three deviations. Constant-deviation kinds only use dev[0].
struct Params {
  std::array<double, 4> logc{};
  std::array<double, 3> dev{};
};

struct Evaluated {
  double area = 0.0;
  Triangle tri;
  Deviations dev;
};

class GeometricSearch {
 public:
  explicit GeometricSearch(const ApproximationSpec& spec)
      : spec_(spec),
        emin_(spec.emin()),
        emax_(spec.emax()),
        slack_(feasibility_slack(spec.emin(), spec.emax())),
        constant_(spec.constant_deviation()),
        interp_(spec.interpolation()) {}

  Deviations deviations(const Params& p) const {
    if (interp_) return {0.0, 0.0, 0.0};
    if (constant_) return {p.dev[0], p.dev[0], p.dev[0]};
    return {p.dev[0], p.dev[1], p.dev[2]};
  }

  void clamp(Params& p) const {
    for (double& d : p.dev) d = std::clamp(d, emin_, emax_);
    for (double& c : p.logc) c = std::clamp(c, -30.0, 30.0);
  }

  // Largest admissible uniform scale of the shape, found by bracketing and
  // bisection on the exact edge-error test.
  Evaluated evaluate(const Params& p) const {
    Evaluated out;
    out.dev = deviations(p);
    const Triangle shape{{0.0, 0.0},
                         {std::exp(p.logc[0]), std::exp(p.logc[1])},
                         {std::exp(p.logc[2]), std::exp(p.logc[3])}};
    if (shape.is_degenerate()) return out;
    const auto k = edge_products(shape);

    auto ok = [&](double s) {
      const double s2 = s * s;
      return edge_ok(out.dev.d1, out.dev.d2, k[0] * s2) &&
             edge_ok(out.dev.d1, out.dev.d3, k[1] * s2) &&
             edge_ok(out.dev.d2, out.dev.d3, k[2] * s2);
    };

    double lo = 0.0;
    double hi = 1.0;
    if (ok(1.0)) {
      lo = 1.0;
      hi = 2.0;
      int guard = 0;
      while (ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) return out;  // unbounded: all edges axis-parallel
      }
    } else {
      int guard = 0;
      while (!ok(hi * 0.5)) {
        hi *= 0.5;
        if (++guard > 200) return out;
      }
      lo = hi * 0.5;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    out.tri = {shape.v1, lo * shape.v2, lo * shape.v3};
    out.area = out.tri.area();
    return out;
  }

  Params sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> devu(emin_, emax_);
    const double shift = 0.5 * std::log(spec_.epsilon);
    Params p;
    for (double& c : p.logc) c = logu(rng) + shift;
    for (double& d : p.dev) d = devu(rng);
    return p;
  }

  // (1+1) evolution strategy with the one-fifth success rule.
  Evaluated refine(Params p, std::size_t iterations, std::mt19937_64& rng) const {
    clamp(p);
    Evaluated best = evaluate(p);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double step = 0.05;
    const double dev_scale = emax_ - emin_;
    for (std::size_t it = 0; it < iterations && step > 1e-13; ++it) {
      Params q = p;
      for (double& c : q.logc) c += step * gauss(rng);
      for (double& d : q.dev) d += step * dev_scale * gauss(rng);
      clamp(q);
      const Evaluated e = evaluate(q);
      if (e.area > best.area) {
        best = e;
        p = q;
        step *= 1.5;
      } else {
        step *= 0.9;
      }
    }
    return best;
  }

 private:
  bool edge_ok(double di, double dj, double k) const {
    if (k == 0.0) return true;
    const double ls = (dj - di) / (2.0 * k) + 0.5;
    if (!(ls > 0.0 && ls < 1.0)) return true;  // endpoints are in range by construction
    const double diff = dj - di;
    const double e = 0.5 * (di + dj) + 0.25 * k + diff * diff / (4.0 * k);
    return e >= emin_ - slack_ && e <= emax_ + slack_;
  }

  ApproximationSpec spec_;
  double emin_;
  double emax_;
  double slack_;
  bool constant_;
  bool interp_;
};

struct Ranked {
  double area = 0.0;
  std::size_t index = 0;
  Params params;
};

bool ranks_before(const Ranked& x, const Ranked& y) {
  return x.area > y.area || (x.area == y.area && x.index < y.index);
}

constexpr std::size_t kChunk = 1 << 14;

}  // namespace

GeometricOracleResult brute_force_geometric(const ApproximationSpec& spec,
                                            const GeometricOracleOptions& opts) {
  const GeometricSearch search(spec);
  const std::size_t samples = std::max<std::size_t>(1, opts.samples);
  const std::size_t keep = std::max<std::size_t>(1, opts.refine_seeds);
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;

  // Each chunk owns an RNG stream, so results do not depend on the worker count.
  std::vector<std::vector<Ranked>> top(chunks);
  std::vector<std::size_t> feasible(chunks, 0);
  parallel_blocks(chunks, worker_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(c), std::uint64_t{0x5eed}};
      std::mt19937_64 rng(seq);
      std::vector<Ranked>& mine = top[c];
      const std::size_t stop = std::min(samples, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < stop; ++i) {
        const Params p = search.sample(rng);
        const Evaluated e = search.evaluate(p);
        if (e.area <= 0.0) continue;
        ++feasible[c];
        if (mine.size() < keep || ranks_before({e.area, i, p}, mine.back())) {
          mine.push_back({e.area, i, p});
          std::sort(mine.begin(), mine.end(), ranks_before);
          if (mine.size() > keep) mine.pop_back();
        }
      }
    }
  });

  std::vector<Ranked> seeds;
  GeometricOracleResult res;
  for (std::size_t c = 0; c < chunks; ++c) {
    seeds.insert(seeds.end(), top[c].begin(), top[c].end());
    res.feasible_samples += feasible[c];
  }
  std::sort(seeds.begin(), seeds.end(), ranks_before);
  if (seeds.size() > keep) seeds.resize(keep);

  std::vector<Evaluated> refined(seeds.size());
  parallel_blocks(seeds.size(), worker_count(),
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t r = begin; r < end; ++r) {
                      std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(r),
                                        std::uint64_t{0x2ef1}};
                      std::mt19937_64 rng(seq);
                      refined[r] = search.refine(seeds[r].params, opts.refine_iterations, rng);
                    }
                  });

  for (const Evaluated& e : refined) {
    if (e.area > res.area) {
      res.area = e.area;
      res.triangle = e.tri;
      res.deviations = e.dev;
    }
  }
  // The search uses a lean closed-form edge test; certify the winner with the
  // exact one, shrinking away rounding-level violations.
  for (int it = 0; it < 64 && res.area > 0.0 &&
                   !geometric_feasible(spec, res.triangle, res.deviations);
       ++it) {
    const double s = 1.0 - std::ldexp(1.0, it - 50);
    const Point o = res.triangle.v1;
    res.triangle = {o, o + s * (res.triangle.v2 - o), o + s * (res.triangle.v3 - o)};
    res.area = res.triangle.area();
  }
  return res;
}

double brute_force_geometric(const ApproximationSpec& spec, std::size_t samples,
                             std::uint64_t seed) {
  GeometricOracleOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  return brute_force_geometric(spec, opts).area;
}

}  // namespace saddle
