#include "knotforge/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "knotforge/diagram.hpp"
#include "knotforge/directional.hpp"
#include "knotforge/errors.hpp"
#include "knotforge/invariants.hpp"
#include "knotforge/secants.hpp"
#include "knotforge/workbench.hpp"

namespace knotforge::cli {

namespace {

using nlohmann::json;

Vec3 parse_vec(const std::string& text) {
  Vec3 v;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
    throw CLI::ValidationError("--dir", "expected x,y,z");
  return v;
}

json bridge_json(const directional::BridgeCount& bc) {
  json j;
  j["value"] = bc.value;
  j["direction"] = {bc.direction.v.x, bc.direction.v.y, bc.direction.v.z};
  j["generic"] = bc.generic;
  j["witnesses"] = bc.witnesses;
  return j;
}

std::string resolve_output(const RunConfig& cfg, const std::string& path) {
  if (cfg.output_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(cfg.output_dir) / path).string();
}

curves::PolygonalKnot polygon_from(const curves::ParametricKnot& knot, int n) {
  return curves::sample_polygon(knot, n);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"knotforge: directional bridge numbers, quadrisecants and knot diagrams"};
  app.set_config("--config");
  app.add_option("--seed", cfg.seed, "seed for every random choice");
  app.add_option("--samples", cfg.n_samples, "sample count for sphere sweeps");
  app.add_option("--grid", cfg.grid, "grid size for smooth bridge counts");
  app.add_option("--eps-level", cfg.eps_level, "level-edge tolerance (relative)")
      ->check(CLI::PositiveNumber);
  app.add_option("--theta-min", cfg.theta_min, "crossing angle floor (radians)")
      ->check(CLI::PositiveNumber);
  app.add_option("--dedup-angle", cfg.dedup_angle, "secant dedup angle")
      ->check(CLI::PositiveNumber);
  app.add_option("--dedup-moment", cfg.dedup_moment, "secant dedup moment (relative)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", cfg.output_dir, "directory for emitted artifacts");
  app.add_option("--format", cfg.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.require_subcommand(1);

  // bridge
  auto* bridge = app.add_subcommand("bridge", "bridge count along one direction");
  std::string bridge_curve, bridge_dir;
  int bridge_n = 0;
  bridge->add_option("curve", bridge_curve, "curve fixture JSON")->required();
  bridge->add_option("--dir", bridge_dir, "direction x,y,z")->required();
  bridge->add_option("--n", bridge_n, "sample to an n-gon first (polygonal count)");

  // sphere
  auto* sphere = app.add_subcommand("sphere", "extremal bridge count over the sphere");
  std::string sphere_curve, sphere_mode = "min";
  int sphere_n = 0;
  bool sphere_refine = false;
  sphere->add_option("curve", sphere_curve)->required();
  sphere->add_option("--mode", sphere_mode)->check(CLI::IsMember({"min", "max"}))->required();
  sphere->add_option("--n", sphere_n, "sample to an n-gon first");
  sphere->add_flag("--refine", sphere_refine, "re-sample near the incumbent");

  // curvature
  auto* curvature = app.add_subcommand("curvature", "total curvature of a polygonal knot");
  std::string curvature_curve;
  int curvature_n = 1000;
  curvature->add_option("curve", curvature_curve)->required();
  curvature->add_option("--n", curvature_n, "polygon size (smooth curves are sampled first)");

  // quadrisecants
  auto* quad = app.add_subcommand("quadrisecants", "lines meeting the knot four times");
  std::string quad_curve;
  int quad_n = 500;
  bool quad_screen = false;
  quad->add_option("curve", quad_curve)->required();
  quad->add_option("--n", quad_n, "polygon size");
  quad->add_flag("--screen", quad_screen, "attach nontriviality screen verdicts");

  // project
  auto* project = app.add_subcommand("project", "planar diagram of a projection");
  std::string project_curve, project_dir, project_svg;
  int project_n = 500, project_secant = -1;
  project->add_option("curve", project_curve)->required();
  project->add_option("--dir", project_dir, "projection direction x,y,z");
  project->add_option("--secant-index", project_secant,
                      "project along the k-th quadrisecant instead");
  project->add_option("--svg", project_svg, "write an SVG rendering here");
  project->add_option("--n", project_n, "polygon size");

  // identify
  auto* identify = app.add_subcommand("identify", "identify a PD code against the knot table");
  std::string identify_pd, identify_table = "fixtures/knot_table.csv";
  identify->add_option("pdfile", identify_pd, "file of X(a,b,c,d) lines")->required();
  identify->add_option("--table", identify_table, "knot table CSV");

  // census
  auto* census_cmd = app.add_subcommand("census", "template census of candidate diagrams");
  std::string census_budget = "default", census_table = "fixtures/knot_table.csv";
  census_cmd->add_option("--budget", census_budget)->check(CLI::IsMember({"default"}));
  census_cmd->add_option("--table", census_table, "knot table CSV");

  // table
  auto* table_cmd = app.add_subcommand("table", "reproduce the superbridge ranges");
  std::string table_in;
  table_cmd->add_option("--in", table_in, "knot table CSV")->required();

  // milnor
  auto* milnor = app.add_subcommand("milnor", "average bridge count vs curvature/2pi");
  std::string milnor_curve;
  int milnor_n = 200;
  milnor->add_option("curve", milnor_curve)->required();
  milnor->add_option("--n", milnor_n, "polygon size");

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << app.help();
    return 2;
  }

  try {
    if (*bridge) {
      Vec3 raw = parse_vec(bridge_dir);
      if (!(raw.norm() > 1e-12)) {
        err << "usage error: --dir must be a nonzero vector\n";
        return 2;
      }
      auto knot = curves::load_curve_json(bridge_curve);
      directional::Direction d = directional::Direction::of(raw);
      directional::BridgeCount bc =
          bridge_n > 0
              ? directional::bridge_count_polygonal(polygon_from(knot, bridge_n), d,
                                                    directional::LevelEdgePolicy::kError,
                                                    cfg.eps_level)
              : directional::bridge_count_smooth(knot, d, cfg.grid);
      out << bridge_json(bc).dump(2) << "\n";
      return 0;
    }
    if (*sphere) {
      auto knot = curves::load_curve_json(sphere_curve);
      directional::SearchParams params;
      params.mode = sphere_mode == "min" ? directional::SearchMode::kMin
                                         : directional::SearchMode::kMax;
      params.n_samples = cfg.n_samples;
      params.seed = cfg.seed;
      params.grid = cfg.grid;
      params.refine = sphere_refine;
      directional::AnyKnot any =
          sphere_n > 0 ? directional::AnyKnot(polygon_from(knot, sphere_n))
                       : directional::AnyKnot(knot);
      auto rep = directional::sphere_search(any, params);
      out << rep.to_json();
      return 0;
    }
    if (*curvature) {
      auto knot = curves::load_curve_json(curvature_curve);
      auto poly = polygon_from(knot, curvature_n);
      double kappa = directional::total_curvature(poly);
      json j;
      j["n"] = curvature_n;
      j["total_curvature"] = kappa;
      j["over_2pi"] = kappa / kTau;
      out << j.dump(2) << "\n";
      return 0;
    }
    if (*quad) {
      auto knot = curves::load_curve_json(quad_curve);
      auto poly = polygon_from(knot, quad_n);
      secants::QuadrisecantSearchStats stats;
      auto lines =
          secants::quadrisecants(poly, &stats, cfg.dedup_angle, cfg.dedup_moment);
      json j;
      j["n"] = quad_n;
      j["count"] = lines.size();
      j["degenerate_triples"] = stats.degenerate_triples;
      j["candidates_tested"] = stats.candidates_tested;
      json arr = json::array();
      for (const auto& s : lines) {
        json sj = json::parse(s.to_json());
        if (quad_screen) {
          auto cert = secants::nontriviality_screen(poly, s);
          sj["screen_verdict"] = cert.verdict == secants::ScreenVerdict::kNontrivial
                                     ? "nontrivial"
                                     : "suspect_trivial";
        }
        arr.push_back(sj);
      }
      j["secants"] = arr;
      out << j.dump(2) << "\n";
      return 0;
    }
    if (*project) {
      auto knot = curves::load_curve_json(project_curve);
      auto poly = polygon_from(knot, project_n);
      json j;
      std::string svg;
      if (project_secant >= 0) {
        auto lines = secants::quadrisecants(poly);
        if (project_secant >= static_cast<int>(lines.size()))
          throw Degenerate("secant index out of range: found " +
                           std::to_string(lines.size()) + " quadrisecants");
        auto sp = diagram::project_along_secant(poly, lines[project_secant]);
        int excluded = 0;
        diagram::QuadExclusion ex{sp.quad_point, sp.suppression_radius};
        auto d = diagram::extract_diagram(sp.proj, ex, &excluded, cfg.theta_min);
        j["crossings"] = d.crossing_count();
        j["excluded_near_quad_point"] = excluded;
        j["quad_point"] = {sp.quad_point.x, sp.quad_point.y};
        j["pd"] = d.crossing_count() > 0 ? d.pd_string() : "";
        svg = diagram::render_svg(sp.proj, &d, sp.quad_point);
      } else {
        if (project_dir.empty()) {
          err << "usage error: need --dir or --secant-index\n";
          return 2;
        }
        Vec3 raw = parse_vec(project_dir);
        if (!(raw.norm() > 1e-12)) {
          err << "usage error: --dir must be a nonzero vector\n";
          return 2;
        }
        auto rd = diagram::project_and_extract(poly, raw, cfg.seed);
        j["crossings"] = rd.diagram.crossing_count();
        j["retries"] = rd.retries;
        j["pd"] = rd.diagram.crossing_count() > 0 ? rd.diagram.pd_string() : "";
        j["gauss"] = rd.diagram.crossing_count() > 0 ? rd.diagram.gauss_string() : "";
        svg = diagram::render_svg(rd.projection, &rd.diagram);
      }
      if (!project_svg.empty()) {
        std::string path = resolve_output(cfg, project_svg);
        std::ofstream f(path);
        if (!f) throw FixtureError("cannot write '" + path + "'");
        f << svg;
        j["svg"] = path;
      }
      out << j.dump(2) << "\n";
      return 0;
    }
    if (*identify) {
      std::ifstream f(identify_pd);
      if (!f) throw FixtureError("cannot open '" + identify_pd + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      auto d = diagram::KnotDiagram::from_pd_string(buf.str());
      auto table = invariants::KnotTable::load_csv(identify_table);
      auto poly = invariants::alexander_polynomial(d);
      auto matches = invariants::identify_by_polynomial(poly, table);
      json j;
      j["alexander"] = poly.to_string();
      j["determinant"] = std::llabs(poly.eval_at_minus_one());
      json names = json::array();
      for (const auto& e : matches) names.push_back(e.name);
      j["candidates"] = names;
      out << j.dump(2) << "\n";
      return 0;
    }
    if (*census_cmd) {
      auto table = invariants::KnotTable::load_csv(census_table);
      workbench::CrossingBudget budget;
      auto rep = workbench::census(budget, table);
      out << rep.to_json();
      return 0;
    }
    if (*table_cmd) {
      auto table = invariants::KnotTable::load_csv(table_in);
      std::vector<workbench::BoundRuleInput> inputs;
      for (const auto& e : table.entries())
        inputs.push_back(workbench::bound_input_from_entry(e));
      auto bounds = workbench::table_bounds(inputs);
      int mismatches = 0;
      if (cfg.format == "csv") {
        out << "name,lo,hi,exact,matches\n";
        for (std::size_t i = 0; i < bounds.size(); ++i) {
          const auto& b = bounds[i];
          const auto& e = table.entries()[i];
          bool ok = b.lo == e.range_lo && b.hi == e.range_hi;
          if (!ok) ++mismatches;
          out << b.name << "," << b.lo << "," << b.hi << ","
              << (b.exact ? std::to_string(*b.exact) : "") << "," << (ok ? "1" : "0") << "\n";
        }
      } else {
        json rows = json::array();
        for (std::size_t i = 0; i < bounds.size(); ++i) {
          const auto& b = bounds[i];
          const auto& e = table.entries()[i];
          bool ok = b.lo == e.range_lo && b.hi == e.range_hi;
          if (!ok) ++mismatches;
          json r;
          r["name"] = b.name;
          r["lo"] = b.lo;
          r["hi"] = b.hi;
          if (b.exact) r["exact"] = *b.exact;
          r["matches_table"] = ok;
          rows.push_back(r);
        }
        json j;
        j["rows"] = rows;
        j["row_count"] = bounds.size();
        j["mismatches"] = mismatches;
        out << j.dump(2) << "\n";
      }
      if (mismatches > 0) {
        err << mismatches << " rows disagree with the published ranges\n";
        return 1;
      }
      return 0;
    }
    if (*milnor) {
      auto knot = curves::load_curve_json(milnor_curve);
      auto poly = polygon_from(knot, milnor_n);
      auto chk = directional::milnor_average_check(poly, cfg.n_samples, cfg.seed);
      json j;
      j["avg_bv"] = chk.avg_bv;
      j["curvature_over_2pi"] = chk.curvature_over_2pi;
      j["discrepancy"] = chk.discrepancy;
      out << j.dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace knotforge::cli
