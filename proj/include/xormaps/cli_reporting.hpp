#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/chaos_diagnostics.hpp"

namespace xormaps::cli_reporting {

// Everything a run needs to be reproduced bit-identically, plus output
// routing. The worker-thread count deliberately lives in the diagnostics
// config but never in serialized reports.
struct RunConfig {
  chaos_diagnostics::DiagConfig diag;
  std::string out_dir;                  // empty: stdout only
  std::vector<std::string> formats;     // subset of {json, csv, svg}
  std::string fixtures_path;            // empty: embedded fixtures
  bool strict{false};
};

struct PlotSpec {
  enum class Kind { Graph, Cobweb, Histogram, Basin };
  Kind kind{Kind::Graph};
  std::string expression;
  int resolution{512};                 // >= 16
  std::vector<std::string> overlays;   // "diagonal", "half"
};

// Series prepared by the command layer; the renderer is pure text assembly.
struct PlotData {
  std::vector<std::pair<double, double>> graph;  // sampled (x, f(x))
  std::vector<double> orbit;                     // cobweb orbit values
  std::vector<double> histogram;                 // bin densities
  std::vector<std::int32_t> basin_cells;         // per grid cell: target or -1
  int basin_targets{0};
};

// Standalone SVG document with [0,1]x[0,1] axes.
std::string render_plot(const PlotSpec& spec, const PlotData& data);

// Runs one CLI invocation (argv without the program name). Exit codes:
// 0 success, 1 reproduction mismatch under --strict, 2 usage/parse errors.
int cmd_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

// --------------------------------------------------------------- reporting

// 16 hex digits of the expression hash, as used in report file names.
std::string hash16(std::uint64_t h);

// Deterministic report base name: "<subcommand>-<hash16>-<seed>".
std::string report_basename(const std::string& subcommand,
                            std::uint64_t expression_hash,
                            std::uint64_t base_seed);

// Whole-file atomic write (temp file + rename) into `dir`, creating it if
// needed; returns the final path. I/O failures throw with the path included.
std::string write_file_atomic(const std::string& dir, const std::string& name,
                              const std::string& content);

// CSV exports (second column sums to 1 for histograms).
std::string histogram_csv(const std::vector<double>& densities);
std::string orbit_csv(const chaos_diagnostics::Orbit& orbit);
std::string basin_csv(const std::vector<std::int32_t>& cells, int grid_n);

}  // namespace xormaps::cli_reporting
