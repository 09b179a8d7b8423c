#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "saddle/error.hpp"
#include "saddle/format.hpp"
#include "saddle/tiling.hpp"

namespace saddle {

namespace {

constexpr const char* kSchema = "saddle-tiler/tiling-v1";

const char* orientation_name(Orientation o) {
  return o == Orientation::Original ? "original" : "reflected";
}

// Blue at emin, red at emax.
std::string ramp(double d, double emin, double emax) {
  const double span = emax - emin;
  const double t = span > 0.0 ? std::clamp((d - emin) / span, 0.0, 1.0) : 0.5;
  const int r = static_cast<int>(std::lround(255.0 * t));
  const int b = 255 - r;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x00%02x", r, b);
  return buf;
}

std::string point_json(Point p) { return "[" + fmt17(p.x) + "," + fmt17(p.y) + "]"; }

}  // namespace

ExportFormat parse_export_format(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "svg" || s == "svg2d") return ExportFormat::Svg;
  if (s == "obj" || s == "obj3d") return ExportFormat::Obj;
  if (s == "json") return ExportFormat::Json;
  throw Error(ErrorKind::UnsupportedFormat, "unknown format '" + s + "'");
}

std::string export_tiling(const Tiling& tiling, ExportFormat format) {
  switch (format) {
    case ExportFormat::Svg: return export_svg(tiling);
    case ExportFormat::Obj: return export_obj(tiling);
    case ExportFormat::Json: return export_json(tiling);
  }
  throw Error(ErrorKind::UnsupportedFormat, "unknown format");
}

std::string export_svg(const Tiling& tiling) {
  // 40 px per unit for a unit error band, scaled with the sqrt(eps) growth of the facets.
  const double band = std::max(std::abs(tiling.emin), std::abs(tiling.emax));
  const double scale = 40.0 / std::sqrt(band > 0.0 ? band : 1.0);
  const double half = tiling.window_half;
  const double margin = 10.0;
  const double size = 2.0 * half * scale + 2.0 * margin;
  auto px = [&](Point p) {
    return fmt17(margin + (p.x + half) * scale) + "," + fmt17(margin + (half - p.y) * scale);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt17(size)
     << "\" height=\"" << fmt17(size) << "\" viewBox=\"0 0 " << fmt17(size) << " " << fmt17(size)
     << "\">\n";
  os << "<defs><clipPath id=\"window\"><rect x=\"" << fmt17(margin) << "\" y=\"" << fmt17(margin)
     << "\" width=\"" << fmt17(2.0 * half * scale) << "\" height=\"" << fmt17(2.0 * half * scale)
     << "\"/></clipPath></defs>\n";
  os << "<g clip-path=\"url(#window)\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
  for (const PlacedFacet& f : tiling.facets) {
    const auto d = f.deviations.as_array();
    const double mean = (d[0] + d[1] + d[2]) / 3.0;
    os << "<polygon points=\"" << px(f.triangle.v1) << " " << px(f.triangle.v2) << " "
       << px(f.triangle.v3) << "\" fill=\"" << ramp(mean, tiling.emin, tiling.emax)
       << "\" fill-opacity=\"0.35\"/>\n";
  }
  os << "</g>\n<g clip-path=\"url(#window)\" stroke=\"none\">\n";
  const double r = std::clamp(0.03 * scale * std::sqrt(tiling.base.area()), 0.5, 4.0);
  for (const PlacedFacet& f : tiling.facets) {
    const auto v = f.triangle.vertices();
    const auto d = f.deviations.as_array();
    for (int i = 0; i < 3; ++i) {
      // Nudge each marker toward the centroid so coincident vertices stay visible.
      const Point c = (1.0 / 3.0) * (f.triangle.v1 + f.triangle.v2 + f.triangle.v3);
      const Point at = v[i] + 0.12 * (c - v[i]);
      const auto xy = px(at);
      const auto comma = xy.find(',');
      os << "<circle cx=\"" << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1)
         << "\" r=\"" << fmt17(r) << "\" fill=\"" << ramp(d[i], tiling.emin, tiling.emax)
         << "\"/>\n";
    }
  }
  os << "</g>\n<rect x=\"" << fmt17(margin) << "\" y=\"" << fmt17(margin) << "\" width=\""
     << fmt17(2.0 * half * scale) << "\" height=\"" << fmt17(2.0 * half * scale)
     << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n</svg>\n";
  return os.str();
}

std::string export_obj(const Tiling& tiling) {
  std::ostringstream os;
  for (const PlacedFacet& f : tiling.facets) {
    for (Point p : f.triangle.vertices()) {
      os << "v " << fmt17(p.x) << " " << fmt17(p.y) << " " << fmt17(f.piece(p)) << "\n";
    }
  }
  for (std::size_t n = 0; n < tiling.facets.size(); ++n) {
    os << "f " << 3 * n + 1 << " " << 3 * n + 2 << " " << 3 * n + 3 << "\n";
  }
  return os.str();
}

std::string export_json(const Tiling& tiling) {
  std::ostringstream os;
  const Triangle& b = tiling.base;
  const Deviations& d = tiling.deviations;
  os << "{\"schema\":\"" << kSchema << "\",\"window_half\":" << fmt17(tiling.window_half)
     << ",\"emin\":" << fmt17(tiling.emin) << ",\"emax\":" << fmt17(tiling.emax) << ",\"base\":["
     << point_json(b.v1) << "," << point_json(b.v2) << "," << point_json(b.v3)
     << "],\"deviations\":[" << fmt17(d.d1) << "," << fmt17(d.d2) << "," << fmt17(d.d3)
     << "],\"facet_count\":" << tiling.facets.size() << ",\"facets\":[";
  for (std::size_t n = 0; n < tiling.facets.size(); ++n) {
    const PlacedFacet& f = tiling.facets[n];
    if (n > 0) os << ",";
    os << "\n{\"i\":" << f.lattice_index.i << ",\"j\":" << f.lattice_index.j
       << ",\"orientation\":\"" << orientation_name(f.orientation)
       << "\",\"local_index\":" << f.local_index << ",\"vertices\":["
       << point_json(f.triangle.v1) << "," << point_json(f.triangle.v2) << ","
       << point_json(f.triangle.v3) << "],\"plane\":{\"alpha\":" << fmt17(f.piece.alpha)
       << ",\"beta\":" << fmt17(f.piece.beta) << ",\"gamma\":" << fmt17(f.piece.gamma)
       << "},\"deviations\":[" << fmt17(f.deviations.d1) << "," << fmt17(f.deviations.d2) << ","
       << fmt17(f.deviations.d3) << "]}";
  }
  os << "\n]}\n";
  return os.str();
}

Tiling tiling_from_json(const std::string& text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != kSchema) {
      throw Error(ErrorKind::ParseError, "unexpected schema");
    }
    auto point = [](const json& j) { return Point{j.at(0).get<double>(), j.at(1).get<double>()}; };
    auto triangle = [&](const json& j) { return Triangle{point(j.at(0)), point(j.at(1)), point(j.at(2))}; };
    auto devs = [](const json& j) {
      return Deviations{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
    };

    Tiling t;
    t.window_half = doc.at("window_half").get<double>();
    t.emin = doc.at("emin").get<double>();
    t.emax = doc.at("emax").get<double>();
    t.base = triangle(doc.at("base"));
    t.deviations = devs(doc.at("deviations"));
    for (const json& jf : doc.at("facets")) {
      PlacedFacet f;
      f.lattice_index = {jf.at("i").get<std::int64_t>(), jf.at("j").get<std::int64_t>()};
      const std::string o = jf.at("orientation").get<std::string>();
      if (o == "original") {
        f.orientation = Orientation::Original;
      } else if (o == "reflected") {
        f.orientation = Orientation::Reflected;
      } else {
        throw Error(ErrorKind::ParseError, "bad orientation '" + o + "'");
      }
      f.local_index = jf.at("local_index").get<std::size_t>();
      f.triangle = triangle(jf.at("vertices"));
      const json& pl = jf.at("plane");
      f.piece = {pl.at("alpha").get<double>(), pl.at("beta").get<double>(),
                 pl.at("gamma").get<double>()};
      f.deviations = devs(jf.at("deviations"));
      t.facets.push_back(f);
    }
    if (doc.at("facet_count").get<std::size_t>() != t.facets.size()) {
      throw Error(ErrorKind::ParseError, "facet_count does not match the facet list");
    }
    t.reindex();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace saddle
