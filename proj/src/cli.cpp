#include "saddle/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "saddle/error.hpp"
#include "saddle/format.hpp"
#include "saddle/optimizer.hpp"
#include "saddle/quadform.hpp"
#include "saddle/tiling.hpp"
#include "saddle/verification.hpp"

namespace saddle {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ApproxKind kind_or_usage(const std::string& text) {
  if (auto k = parse_kind(text)) return *k;
  throw UsageError("unknown approximation class '" + text + "'");
}

void print_solution(std::ostream& out, const OptimalSolution& s) {
  const auto line = [&](const char* key, const std::string& value) {
    out << key << std::string(20 - std::string(key).size(), ' ') << value << "\n";
  };
  line("kind", std::string(kind_name(s.kind)));
  line("epsilon", fmt17(s.epsilon));
  line("area", fmt17(s.area));
  line("density", fmt17(s.density));
  line("deviations",
       fmt17(s.deviations.d1) + " " + fmt17(s.deviations.d2) + " " + fmt17(s.deviations.d3));
  line("k_ascending", fmt17(s.k_ascending));
  line("k_descending", fmt17(s.k_descending));
  line("lambda_ascending", fmt17(s.lambda_ascending));
  line("lambda_descending", fmt17(s.lambda_descending));
  const auto pt = [](Point p) { return "(" + fmt17(p.x) + ", " + fmt17(p.y) + ")"; };
  line("vertices", pt(s.vertices.v1) + " " + pt(s.vertices.v2) + " " + pt(s.vertices.v3));
  line("aspect_ratio", fmt17(s.aspect_ratio));
}

void print_tables(std::ostream& out, double eps) {
  char buf[256];
  out << "Areas and densities\n";
  std::snprintf(buf, sizeof buf, "%-18s %12s %12s\n", "class", "area", "density");
  out << buf;
  for (ApproxKind k : kAllKinds) {
    const OptimalSolution s = optimal_triangle({k, eps});
    std::snprintf(buf, sizeof buf, "%-18s %12.6f %12.6f\n", std::string(kind_name(k)).c_str(),
                  s.area, s.density);
    out << buf;
  }
  out << "\nOptimal parameters\n";
  std::snprintf(buf, sizeof buf, "%-18s %10s %10s %10s %10s %10s\n", "class", "k", "d1", "d2=d3",
                "lambda1", "lambda3");
  out << buf;
  for (ApproxKind k : kAllKinds) {
    const OptimalSolution s = optimal_triangle({k, eps});
    std::snprintf(buf, sizeof buf, "%-18s %10.6f %10.6f %10.6f %10.6f %10.6f\n",
                  std::string(kind_name(k)).c_str(), s.k_ascending, s.deviations.d1,
                  s.deviations.d2, s.lambda_ascending, s.lambda_descending);
    out << buf;
  }
}

int cmd_optimal(std::ostream& out, const std::string& kind, double eps, bool json, bool all) {
  if (all) {
    if (json) {
      out << "[";
      for (std::size_t i = 0; i < kAllKinds.size(); ++i) {
        out << (i ? "," : "") << to_json(optimal_triangle({kAllKinds[i], eps}));
      }
      out << "]\n";
    } else {
      print_tables(out, eps);
    }
    return kExitOk;
  }
  const OptimalSolution s = optimal_triangle({kind_or_usage(kind), eps});
  if (json) {
    out << to_json(s) << "\n";
  } else {
    print_solution(out, s);
  }
  return kExitOk;
}

int cmd_reduce(std::ostream& out, const QuadraticForm& qf, double eps, bool json) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorKind::InvalidEpsilon, "epsilon must be positive");
  }
  const StandardReduction red = reduce_to_standard(qf);
  const double eps_std = eps / std::abs(red.kappa);
  if (json) {
    out << "{\"form\":" << to_json(qf) << ",\"reduction\":" << to_json(red)
        << ",\"epsilon\":" << fmt17(eps) << ",\"epsilon_std\":" << fmt17(eps_std) << "}\n";
    return kExitOk;
  }
  out << "case        " << reduction_case_name(red.case_tag) << "\n"
      << "phi         [[" << fmt17(red.phi[0][0]) << ", " << fmt17(red.phi[0][1]) << "], ["
      << fmt17(red.phi[1][0]) << ", " << fmt17(red.phi[1][1]) << "]]\n"
      << "kappa       " << fmt17(red.kappa) << "\n"
      << "jacobian    " << fmt17(red.jacobian) << "\n"
      << "residual    " << fmt17(red.residual.alpha) << " u + " << fmt17(red.residual.beta)
      << " v + " << fmt17(red.residual.gamma) << "\n"
      << "epsilon     " << fmt17(eps) << "\n"
      << "eps_std     " << fmt17(eps_std) << "  (eps / |kappa|: tolerance for uv)\n";
  return kExitOk;
}

int cmd_tile(std::ostream& out, const std::string& kind, double eps, double window,
             const std::string& format, const std::string& path) {
  ExportFormat fmt;
  try {
    fmt = parse_export_format(format);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Tiling t = build_tiling(optimal_triangle({kind_or_usage(kind), eps}), window);
  const std::string body = export_tiling(t, fmt);
  {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << body;
    file.flush();
    if (!file) throw IoError("failed writing '" + path + "'");
  }
  const ContinuityReport c = continuity_report(t);
  out << "facets          " << t.facets.size() << "\n"
      << "density         " << fmt17(density_estimate(t, window)) << "\n"
      << "max_error       " << fmt17(max_error_over_window(t)) << "\n"
      << "vertex_jump     " << fmt17(c.max_vertex_jump) << "\n"
      << "edge_jump       " << fmt17(c.max_edge_jump) << "\n"
      << "output          " << path << "\n";
  return kExitOk;
}

int cmd_verify(std::ostream& out, const std::string& level, double tamper, bool timings) {
  VerifyOptions opts;
  if (level == "fast") {
    opts.level = VerifyLevel::Fast;
  } else if (level == "full") {
    opts.level = VerifyLevel::Full;
  } else {
    throw UsageError("level must be fast or full");
  }
  opts.tamper = tamper;
  bool all = true;
  opts.on_result = [&](const CheckResult& r) {
    all = all && r.passed;
    if (timings) {
      out << format_result(r) << "\n";
    } else {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << " " << r.detail << "\n";
    }
    out.flush();
  };
  run_checks(opts);
  out << (all ? "all checks passed" : "verification failed") << "\n";
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal triangulations for piecewise-linear approximation of xy", "saddle-tiler"};
  app.require_subcommand(1);

  std::string kind;
  double eps = 1.0;
  bool json = false;
  bool all = false;
  auto* optimal = app.add_subcommand("optimal", "Closed-form optimal triangle of a class");
  optimal->add_option("kind", kind, "general, continuous, interpolation, over, under, "
                                    "continuous-over, continuous-under");
  optimal->add_option("--epsilon", eps, "Error bound");
  optimal->add_flag("--json", json, "Emit JSON");
  optimal->add_flag("--all", all, "Print every class as tables");

  QuadraticForm qf;
  auto* reduce = app.add_subcommand("reduce", "Reduce an indefinite quadratic to kappa * uv");
  reduce->add_option("--a", qf.a, "x^2 coefficient");
  reduce->add_option("--b", qf.b, "half the xy coefficient");
  reduce->add_option("--c", qf.c, "y^2 coefficient");
  reduce->add_option("--d", qf.d, "x coefficient");
  reduce->add_option("--e", qf.e, "y coefficient");
  reduce->add_option("--g", qf.g, "constant");
  reduce->add_option("--epsilon", eps, "Error bound for the source form");
  reduce->add_flag("--json", json, "Emit JSON");

  double window = 20.0;
  std::string format = "svg";
  std::string path;
  auto* tile = app.add_subcommand("tile", "Tile a square window and export it");
  tile->add_option("kind", kind, "Approximation class")->required();
  tile->add_option("--epsilon", eps, "Error bound");
  tile->add_option("--window", window, "Side length of the square window");
  tile->add_option("--format", format, "svg, obj or json");
  tile->add_option("--out", path, "Output file (default tiling.<format>)");

  std::string level = "fast";
  double tamper = 0.0;
  bool timings = false;
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--level", level, "fast or full");
  verify->add_flag("--timings", timings, "Show per-check run times");
  verify->add_option("--tamper-constant", tamper)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*optimal) {
      if (kind.empty() && !all) throw UsageError("optimal needs a class or --all");
      return cmd_optimal(out, kind, eps, json, all);
    }
    if (*reduce) return cmd_reduce(out, qf, eps, json);
    if (*tile) {
      if (path.empty()) path = "tiling." + format;
      return cmd_tile(out, kind, eps, window, format, path);
    }
    if (*verify) return cmd_verify(out, level, tamper, timings);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace saddle
