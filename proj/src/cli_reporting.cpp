#include "xormaps/cli_reporting.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xormaps/branch_analysis.hpp"
#include "xormaps/experiments.hpp"
#include "xormaps/fuzzy_combinators.hpp"
#include "xormaps/map_core.hpp"
#include "xormaps/rng.hpp"

namespace xormaps::cli_reporting {
namespace {

namespace fs = std::filesystem;
using chaos_diagnostics::DiagConfig;
using map_core::MapExpr;

std::string num(double v) { return nlohmann::json(v).dump(); }

std::vector<std::string> formats_or_json(const RunConfig& rc) {
  return rc.formats.empty() ? std::vector<std::string>{"json"} : rc.formats;
}

nlohmann::json fixtures_for(const RunConfig& rc) {
  return rc.fixtures_path.empty()
             ? experiments::default_fixtures()
             : experiments::load_fixtures_file(rc.fixtures_path);
}

void add_output_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--out", rc.out_dir, "directory for report files");
  cmd->add_option("--format", rc.formats,
                  "report format, repeatable (default json)")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
}

void add_budget_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--seed", rc.diag.base_seed, "base seed of the seed stream");
  cmd->add_option("--seeds", rc.diag.seeds, "number of orbit seeds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iters", rc.diag.iterates, "iterates per seed")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--transient", rc.diag.transient, "discarded iterates");
  cmd->add_option("--bins", rc.diag.bins, "histogram/coverage bins")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid", rc.diag.grid_n, "grid intervals for scans")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", rc.diag.threads, "worker threads (0 = hardware)");
  auto& th = rc.diag.thresholds;
  cmd->add_option("--lyap-chaotic", th.lyapunov_chaotic,
                  "Lyapunov bound for Chaotic");
  cmd->add_option("--lyap-nonchaotic", th.lyapunov_nonchaotic,
                  "Lyapunov bound for NonChaotic");
  cmd->add_option("--coverage-min", th.coverage_min,
                  "coverage needed for Chaotic");
  cmd->add_option("--basin-min", th.basin_min,
                  "stable-basin fraction for NonChaotic");
  cmd->add_option("--coverage-collapse", th.coverage_collapse,
                  "coverage at or below which orbits count as collapsed");
  cmd->add_option("--coverage-confined", th.coverage_confined,
                  "coverage below which expanding maps count as confined");
}

bool thresholds_valid(const RunConfig& rc, std::ostream& err) {
  if (rc.diag.thresholds.lyapunov_nonchaotic >=
      rc.diag.thresholds.lyapunov_chaotic) {
    err << "error: --lyap-nonchaotic must be below --lyap-chaotic\n";
    return false;
  }
  return true;
}

void note_written(std::ostream& err, const std::string& path) {
  err << "wrote " << path << "\n";
}

// ------------------------------------------------------------- subcommands

int do_catalog(std::ostream& out) {
  const auto& entries = map_core::catalog_entries();
  out << "catalog:";
  for (const auto& e : entries) out << " " << e.id;
  out << "\n";
  for (const auto& e : entries) {
    out << "  " << e.id;
    if (!e.params.empty()) {
      out << "(";
      for (std::size_t i = 0; i < e.params.size(); ++i) {
        const auto& p = e.params[i];
        if (i > 0) out << ", ";
        out << p.name << "=" << num(p.def) << " in "
            << (p.min_exclusive ? "(" : "[") << num(p.min) << ", "
            << num(p.max) << "]";
      }
      out << ")";
    }
    out << ": " << e.description << "; " << e.full_branches
        << " full branches" << (e.has_exact_pa ? "; exact PA form" : "")
        << "\n";
  }
  return 0;
}

int do_eval(const std::string& expr_text, double x, std::ostream& out,
            std::ostream& err) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  if (!(x >= 0.0 && x <= 1.0)) {
    err << "error: x must lie in [0,1], got " << num(x) << "\n";
    return 2;
  }
  out << num(map_core::eval(map, x)) << "\n";
  return 0;
}

int do_combine(const std::string& expr_text, bool emit_pa, const RunConfig& rc,
               std::ostream& out, std::ostream& err) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  if (!emit_pa) {
    out << map_core::to_string(map) << "\n";
    try {
      fuzzy_combinators::to_piecewise_affine(map);
      out << "exact piecewise-affine form: available (--emit-pa)\n";
    } catch (const fuzzy_combinators::NotPiecewiseAffine&) {
      out << "exact piecewise-affine form: not available\n";
    }
    return 0;
  }
  fuzzy_combinators::PiecewiseAffineMap pa;
  try {
    pa = fuzzy_combinators::to_piecewise_affine(map);
  } catch (const fuzzy_combinators::NotPiecewiseAffine& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto doc = pa.to_json();
  out << doc.dump(2) << "\n";
  if (!rc.out_dir.empty()) {
    const auto base = report_basename(
        "combine", map_core::expression_hash(map), rc.diag.base_seed);
    note_written(err, write_file_atomic(rc.out_dir, base + ".json",
                                        doc.dump(2) + "\n"));
  }
  return 0;
}

int do_branches(const std::string& expr_text, std::ostream& out) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  const auto d = branch_analysis::full_branch_decomposition(map);
  out << d.full_count << " full branches / " << d.branches.size()
      << " branches" << (d.exact ? " (exact)" : "") << "\n";
  for (const auto& b : d.branches) {
    const char* mono =
        b.monotonicity == branch_analysis::Monotonicity::Increasing
            ? "increasing"
        : b.monotonicity == branch_analysis::Monotonicity::Decreasing
            ? "decreasing"
            : "flat";
    out << "  [" << num(b.interval.lo) << ", " << num(b.interval.hi) << "] "
        << mono << ", image [" << num(b.image.lo) << ", " << num(b.image.hi)
        << "]" << (b.is_full ? ", full" : "") << "\n";
  }
  return 0;
}

int write_diag_outputs(const chaos_diagnostics::DiagnosticsReport& report,
                       const nlohmann::ordered_json& doc, const RunConfig& rc,
                       const std::string& subcommand, std::uint64_t hash,
                       std::ostream& err) {
  if (rc.out_dir.empty()) return 0;
  const auto base = report_basename(subcommand, hash, rc.diag.base_seed);
  for (const auto& format : formats_or_json(rc)) {
    if (format == "json") {
      note_written(err, write_file_atomic(rc.out_dir, base + ".json",
                                          doc.dump(2) + "\n"));
    } else if (format == "csv") {
      note_written(err, write_file_atomic(rc.out_dir, base + ".csv",
                                          histogram_csv(report.histogram)));
    } else if (format == "svg") {
      PlotSpec spec;
      spec.kind = PlotSpec::Kind::Histogram;
      spec.expression = report.expression;
      PlotData data;
      data.histogram = report.histogram;
      note_written(err, write_file_atomic(rc.out_dir, base + ".svg",
                                          render_plot(spec, data)));
    }
  }
  return 0;
}

int do_diagnose(const std::string& expr_text, const RunConfig& rc,
                std::ostream& out, std::ostream& err) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  const auto report = chaos_diagnostics::run_diagnostics(map, rc.diag);
  const auto doc = chaos_diagnostics::report_to_json(report);
  out << doc.dump(2) << "\n";
  return write_diag_outputs(report, doc, rc, "diagnose",
                            map_core::expression_hash(map), err);
}

int do_fixed_points(const std::string& expr_text, int period,
                    const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  const auto scan =
      chaos_diagnostics::find_fixed_points(map, rc.diag.grid_n, period);
  auto points = nlohmann::ordered_json::array();
  for (const auto& fp : scan.points) {
    points.push_back(nlohmann::ordered_json{
        {"location", fp.location},
        {"multiplier", fp.multiplier},
        {"stability", chaos_diagnostics::to_string(fp.stability)},
        {"period", fp.period}});
  }
  const nlohmann::ordered_json doc{{"expression", map_core::to_string(map)},
                                   {"period", period},
                                   {"grid", rc.diag.grid_n},
                                   {"points", std::move(points)},
                                   {"truncated", scan.truncated}};
  out << doc.dump(2) << "\n";
  if (!rc.out_dir.empty()) {
    const auto base = report_basename(
        "fixed-points", map_core::expression_hash(map), rc.diag.base_seed);
    note_written(err, write_file_atomic(rc.out_dir, base + ".json",
                                        doc.dump(2) + "\n"));
  }
  return 0;
}

std::vector<double> stable_targets(const MapExpr& map, const RunConfig& rc) {
  std::vector<double> targets;
  const auto scan = chaos_diagnostics::find_fixed_points(map, rc.diag.grid_n, 1);
  for (const auto& fp : scan.points) {
    if (fp.stability == chaos_diagnostics::Stability::Stable) {
      targets.push_back(fp.location);
    }
  }
  return targets;
}

int do_basin(const std::string& expr_text, std::vector<double> targets,
             const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  if (targets.empty()) targets = stable_targets(map, rc);
  nlohmann::ordered_json doc{{"expression", map_core::to_string(map)},
                             {"targets", targets}};
  if (targets.empty()) {
    doc["note"] = "no stable fixed points to target; pass --targets";
    out << doc.dump(2) << "\n";
    return 0;
  }
  const auto result = chaos_diagnostics::basin_map(
      map, targets, rc.diag.grid_n, rc.diag.basin_max_iter, rc.diag.basin_tol,
      rc.diag.threads);
  doc["fractions"] = result.fractions;
  doc["unresolved"] = result.unresolved;
  out << doc.dump(2) << "\n";
  if (!rc.out_dir.empty()) {
    const auto base = report_basename(
        "basin", map_core::expression_hash(map), rc.diag.base_seed);
    for (const auto& format : formats_or_json(rc)) {
      if (format == "json") {
        auto full = doc;
        full["cells"] = result.cells;
        note_written(err, write_file_atomic(rc.out_dir, base + ".json",
                                            full.dump(2) + "\n"));
      } else if (format == "csv") {
        note_written(err, write_file_atomic(rc.out_dir, base + ".csv",
                                            basin_csv(result.cells,
                                                      rc.diag.grid_n)));
      } else if (format == "svg") {
        PlotSpec spec;
        spec.kind = PlotSpec::Kind::Basin;
        spec.expression = map_core::to_string(map);
        PlotData data;
        data.basin_cells = result.cells;
        data.basin_targets = static_cast<int>(targets.size());
        note_written(err, write_file_atomic(rc.out_dir, base + ".svg",
                                            render_plot(spec, data)));
      }
    }
  }
  return 0;
}

int write_suite_outputs(const nlohmann::ordered_json& doc,
                        const std::string& text, const std::string& subcommand,
                        const RunConfig& rc, std::ostream& err) {
  if (rc.out_dir.empty()) return 0;
  const auto base = report_basename(subcommand, map_core::text_hash(subcommand),
                                    rc.diag.base_seed);
  note_written(err,
               write_file_atomic(rc.out_dir, base + ".json", doc.dump(2) + "\n"));
  note_written(err, write_file_atomic(rc.out_dir, base + ".txt", text));
  return 0;
}

int do_table(double r, const RunConfig& rc, std::ostream& out,
             std::ostream& err) {
  const auto matrix = experiments::run_xor_table(r, fixtures_for(rc), rc.diag);
  const auto text = experiments::to_text(matrix);
  out << text;
  write_suite_outputs(experiments::to_json(matrix), text, "table", rc, err);
  return rc.strict && !matrix.all_match ? 1 : 0;
}

int do_example(const experiments::ExampleReport& report, const RunConfig& rc,
               const std::string& subcommand, std::ostream& out,
               std::ostream& err) {
  const auto text = experiments::to_text(report);
  out << text;
  write_suite_outputs(experiments::to_json(report), text, subcommand, rc, err);
  return rc.strict && !report.pass ? 1 : 0;
}

int do_plot(const std::string& kind_text, const std::string& expr_text,
            int resolution, const std::vector<std::string>& overlay_list,
            double x0, bool x0_set, int steps, const RunConfig& rc,
            std::ostream& out, std::ostream& err) {
  const MapExpr map = map_core::parse_map_expr(expr_text);
  PlotSpec spec;
  spec.expression = map_core::to_string(map);
  spec.resolution = resolution;
  spec.overlays = overlay_list;
  PlotData data;

  const auto sample_graph = [&](int n) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      pts.emplace_back(x, map_core::eval(map, x));
    }
    return pts;
  };

  if (kind_text == "graph") {
    spec.kind = PlotSpec::Kind::Graph;
    data.graph = sample_graph(resolution);
  } else if (kind_text == "cobweb") {
    spec.kind = PlotSpec::Kind::Cobweb;
    data.graph = sample_graph(std::max(resolution, 256));
    const double seed = x0_set ? x0 : orbit_seed(rc.diag.base_seed, 0);
    data.orbit = chaos_diagnostics::iterate_orbit(
                     map, seed, static_cast<std::uint64_t>(steps), 0)
                     .points;
  } else if (kind_text == "histogram") {
    spec.kind = PlotSpec::Kind::Histogram;
    const auto seeds =
        chaos_diagnostics::derive_seeds(rc.diag.base_seed, rc.diag.seeds);
    data.histogram = chaos_diagnostics::invariant_histogram(
        map, seeds, rc.diag.iterates, rc.diag.bins, rc.diag.transient,
        rc.diag.threads);
  } else {  // basin (kind membership enforced by the flag grammar)
    spec.kind = PlotSpec::Kind::Basin;
    const auto targets = stable_targets(map, rc);
    if (targets.empty()) {
      err << "error: no stable fixed points; a basin plot needs targets\n";
      return 2;
    }
    const auto result = chaos_diagnostics::basin_map(
        map, targets, rc.diag.grid_n, rc.diag.basin_max_iter,
        rc.diag.basin_tol, rc.diag.threads);
    data.basin_cells = result.cells;
    data.basin_targets = static_cast<int>(targets.size());
  }

  const std::string svg = render_plot(spec, data);
  if (rc.out_dir.empty()) {
    out << svg;
  } else {
    const auto base = report_basename(
        "plot-" + kind_text, map_core::expression_hash(map), rc.diag.base_seed);
    note_written(err, write_file_atomic(rc.out_dir, base + ".svg", svg));
  }
  return 0;
}

}  // namespace

// --------------------------------------------------------------- reporting

std::string hash16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string report_basename(const std::string& subcommand,
                            std::uint64_t expression_hash,
                            std::uint64_t base_seed) {
  return subcommand + "-" + hash16(expression_hash) + "-" +
         std::to_string(base_seed);
}

std::string write_file_atomic(const std::string& dir, const std::string& name,
                              const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + dir + ": " +
                             ec.message());
  }
  const fs::path final_path = fs::path(dir) / name;
  const fs::path temp_path = fs::path(dir) / (name + ".tmp");
  {
    std::ofstream f(temp_path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << content) || !f.flush()) {
      throw std::runtime_error("cannot write " + temp_path.string());
    }
  }
  fs::rename(temp_path, final_path, ec);
  if (ec) {
    throw std::runtime_error("cannot move " + temp_path.string() + " to " +
                             final_path.string() + ": " + ec.message());
  }
  return final_path.string();
}

std::string histogram_csv(const std::vector<double>& densities) {
  std::ostringstream csv;
  csv << "x,density\n";
  const std::size_t bins = densities.size();
  for (std::size_t i = 0; i < bins; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(bins);
    csv << num(x) << "," << num(densities[i]) << "\n";
  }
  return csv.str();
}

std::string orbit_csv(const chaos_diagnostics::Orbit& orbit) {
  std::ostringstream csv;
  csv << "step,x\n";
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    csv << i << "," << num(orbit.points[i]) << "\n";
  }
  return csv.str();
}

std::string basin_csv(const std::vector<std::int32_t>& cells, int grid_n) {
  std::ostringstream csv;
  csv << "x,target\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    csv << num(static_cast<double>(i) / grid_n) << "," << cells[i] << "\n";
  }
  return csv.str();
}

// ---------------------------------------------------------------- dispatch

int cmd_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"fuzzy-XOR interval map laboratory"};
  app.name("xormaps");
  app.require_subcommand(1);

  RunConfig rc;
  std::string expr_text;
  double eval_x = 0.5;
  bool emit_pa = false;
  int period = 1;
  std::vector<double> targets;
  double table_r = 4.0;
  double example_r = 3.9;
  std::string plot_kind;
  int resolution = 512;
  std::vector<std::string> overlay_list;
  double x0 = 0.0;
  int cobweb_steps = 48;

  auto* catalog_cmd = app.add_subcommand("catalog", "list the map catalog");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate EXPR at a point");
  eval_cmd->add_option("expr", expr_text, "map expression")->required();
  eval_cmd->add_option("x", eval_x, "point in [0,1]")->required();

  auto* combine_cmd =
      app.add_subcommand("combine", "canonicalize EXPR; --emit-pa for the "
                                    "exact piecewise-affine form");
  combine_cmd->add_option("expr", expr_text, "map expression")->required();
  combine_cmd->add_flag("--emit-pa", emit_pa, "emit the exact PA JSON");
  add_output_flags(combine_cmd, rc);
  combine_cmd->add_option("--seed", rc.diag.base_seed, "seed used in file names");

  auto* branches_cmd =
      app.add_subcommand("branches", "full-branch decomposition of EXPR");
  branches_cmd->add_option("expr", expr_text, "map expression")->required();

  auto* diagnose_cmd =
      app.add_subcommand("diagnose", "full chaos diagnostics of EXPR");
  diagnose_cmd->add_option("expr", expr_text, "map expression")->required();
  add_budget_flags(diagnose_cmd, rc);
  add_output_flags(diagnose_cmd, rc);

  auto* fp_cmd = app.add_subcommand("fixed-points",
                                    "periodic points of EXPR on a grid");
  fp_cmd->add_option("expr", expr_text, "map expression")->required();
  fp_cmd->add_option("--period", period, "cycle period")->check(CLI::Range(1, 12));
  add_budget_flags(fp_cmd, rc);
  add_output_flags(fp_cmd, rc);

  auto* basin_cmd =
      app.add_subcommand("basin", "basins of attraction on a grid");
  basin_cmd->add_option("expr", expr_text, "map expression")->required();
  basin_cmd->add_option("--targets", targets,
                        "attractor locations (default: stable fixed points)");
  add_budget_flags(basin_cmd, rc);
  add_output_flags(basin_cmd, rc);

  auto* table_cmd =
      app.add_subcommand("table", "reproduce the 5x5 pairwise verdict table");
  table_cmd->add_option("--r", table_r, "logistic parameter");
  table_cmd->add_flag("--strict", rc.strict, "exit 1 on any mismatch");
  table_cmd->add_option("--fixtures", rc.fixtures_path, "fixtures file");
  add_budget_flags(table_cmd, rc);
  add_output_flags(table_cmd, rc);

  auto* ex1_cmd =
      app.add_subcommand("example1", "reproduce the logistic-vs-tent example");
  ex1_cmd->add_option("--r", example_r, "logistic parameter");
  ex1_cmd->add_flag("--strict", rc.strict, "exit 1 when facts fail");
  ex1_cmd->add_option("--fixtures", rc.fixtures_path, "fixtures file");
  add_budget_flags(ex1_cmd, rc);
  add_output_flags(ex1_cmd, rc);

  auto* ex2_cmd =
      app.add_subcommand("example2", "reproduce the tent-vs-inverted-tent example");
  ex2_cmd->add_flag("--strict", rc.strict, "exit 1 when facts fail");
  ex2_cmd->add_option("--fixtures", rc.fixtures_path, "fixtures file");
  add_budget_flags(ex2_cmd, rc);
  add_output_flags(ex2_cmd, rc);

  auto* props_cmd =
      app.add_subcommand("props", "check the mirror/branch-doubling propositions");
  props_cmd->add_flag("--strict", rc.strict, "exit 1 when facts fail");
  props_cmd->add_option("--fixtures", rc.fixtures_path, "fixtures file");
  add_budget_flags(props_cmd, rc);
  add_output_flags(props_cmd, rc);

  auto* plot_cmd = app.add_subcommand("plot", "render an SVG plot");
  plot_cmd->add_option("kind", plot_kind, "graph|cobweb|histogram|basin")
      ->required()
      ->check(CLI::IsMember({"graph", "cobweb", "histogram", "basin"}));
  plot_cmd->add_option("expr", expr_text, "map expression")->required();
  plot_cmd->add_option("--resolution", resolution, "graph samples")
      ->check(CLI::Range(16, 1000000));
  plot_cmd->add_option("--overlay", overlay_list,
                       "overlays, repeatable: diagonal|half")
      ->check(CLI::IsMember({"diagonal", "half"}));
  auto* x0_opt = plot_cmd->add_option("--x0", x0, "cobweb start point")
                     ->check(CLI::Range(0.0, 1.0));
  plot_cmd->add_option("--steps", cobweb_steps, "cobweb orbit length")
      ->check(CLI::Range(1, 100000));
  add_budget_flags(plot_cmd, rc);
  add_output_flags(plot_cmd, rc);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("xormaps");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (!thresholds_valid(rc, err)) return 2;
    if (catalog_cmd->parsed()) return do_catalog(out);
    if (eval_cmd->parsed()) return do_eval(expr_text, eval_x, out, err);
    if (combine_cmd->parsed()) return do_combine(expr_text, emit_pa, rc, out, err);
    if (branches_cmd->parsed()) return do_branches(expr_text, out);
    if (diagnose_cmd->parsed()) return do_diagnose(expr_text, rc, out, err);
    if (fp_cmd->parsed()) return do_fixed_points(expr_text, period, rc, out, err);
    if (basin_cmd->parsed()) return do_basin(expr_text, targets, rc, out, err);
    if (table_cmd->parsed()) return do_table(table_r, rc, out, err);
    if (ex1_cmd->parsed()) {
      return do_example(
          experiments::run_example1(example_r, fixtures_for(rc), rc.diag), rc,
          "example1", out, err);
    }
    if (ex2_cmd->parsed()) {
      return do_example(experiments::run_example2(fixtures_for(rc), rc.diag),
                        rc, "example2", out, err);
    }
    if (props_cmd->parsed()) {
      return do_example(experiments::run_prop_suite(fixtures_for(rc), rc.diag),
                        rc, "props", out, err);
    }
    if (plot_cmd->parsed()) {
      return do_plot(plot_kind, expr_text, resolution, overlay_list, x0,
                     x0_opt->count() > 0, cobweb_steps, rc, out, err);
    }
  } catch (const map_core::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // no subcommand matched; require_subcommand makes this unreachable
}

}  // namespace xormaps::cli_reporting
