#pragma once

// Parallelogram tilings: copies of a base triangle T translated over the
// lattice spanned by its edges, plus point-reflected copies T' filling the
// other half of every lattice cell.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddle/geometry.hpp"
#include "saddle/optimizer.hpp"
#include "saddle/quadform.hpp"
#include "saddle/triangle_error.hpp"

namespace saddle {

enum class Orientation { Original, Reflected };

struct LatticeIndex {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
};

/// One facet of the tiling. `deviations` are listed in role order: for an
/// original copy the images of (v1, v2, v3), for a reflected copy the images
/// of (-v1, -v2, -v3) after translation.
struct PlacedFacet {
  Triangle triangle;
  LinearPiece piece;
  Deviations deviations;
  Orientation orientation = Orientation::Original;
  LatticeIndex lattice_index;
  std::size_t local_index = 0;
};

struct TilingOptions {
  std::size_t max_facets = 10'000'000;
  // Error band used for colouring and reports; defaults to the deviation range.
  std::optional<double> emin;
  std::optional<double> emax;
};

class Tiling {
 public:
  Triangle base;
  Deviations deviations;
  double window_half = 0.0;
  double emin = 0.0;
  double emax = 0.0;
  std::vector<PlacedFacet> facets;

  Point e2() const { return base.v2 - base.v1; }
  Point e3() const { return base.v3 - base.v1; }
  Box window() const { return Box::centered(window_half); }

  /// Image of base.v1 under the lattice translation (i, j).
  Point lattice_point(std::int64_t i, std::int64_t j) const;
  /// Real lattice coordinates (s, t) with p = v1 + s e2 + t e3.
  Point lattice_coords(Point p) const;

  const PlacedFacet* find(LatticeIndex idx, Orientation o) const;

  /// Rebuilds the (i, j, orientation) lookup after `facets` changed.
  void reindex();

 private:
  std::int64_t i0_ = 0;
  std::int64_t j0_ = 0;
  std::int64_t ni_ = 0;
  std::int64_t nj_ = 0;
  std::vector<std::int64_t> slots_;
};

/// Every copy of T and T' meeting the closed window [-window/2, window/2]^2.
Tiling build_tiling(const Triangle& base, const Deviations& dev, double window,
                    const TilingOptions& opts = {});
Tiling build_tiling(const OptimalSolution& sol, double window, TilingOptions opts = {});

/// Lattice vertices (of the facet in role order) as integer lattice keys.
std::array<LatticeIndex, 3> facet_lattice_vertices(const PlacedFacet& f);

/// Value of the piecewise-linear function: the containing facet with the
/// smallest local index decides.
double pwl_eval(const Tiling& tiling, Point p);
const PlacedFacet& containing_facet(const Tiling& tiling, Point p);

/// Exact error over facets lying entirely in the window (all facets when none does).
double max_error_over_window(const Tiling& tiling);

/// Facets meeting the closed square [-ell/2, ell/2]^2, divided by ell^2.
double density_estimate(const Tiling& tiling, double ell);

struct ContinuityReport {
  double max_vertex_jump = 0.0;
  double max_edge_jump = 0.0;
};

ContinuityReport continuity_report(const Tiling& tiling);

// ---- export -------------------------------------------------------------

enum class ExportFormat { Svg, Obj, Json };

ExportFormat parse_export_format(std::string_view name);
std::string export_tiling(const Tiling& tiling, ExportFormat format);
std::string export_svg(const Tiling& tiling);
std::string export_obj(const Tiling& tiling);
std::string export_json(const Tiling& tiling);

/// Parses the JSON export. Facets are taken verbatim from the document.
Tiling tiling_from_json(const std::string& text);

}  // namespace saddle
