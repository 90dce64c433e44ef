#include "xormaps/chaos_diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "xormaps/exact_engine.hpp"
#include "xormaps/rng.hpp"

namespace xormaps::chaos_diagnostics {
namespace {

using map_core::MapExpr;

constexpr double kDerivSkipTol = 1e-15;
// A refined sign change whose residual stays above this on both bracket ends
// went through a jump discontinuity, not a root.
constexpr double kRootResidualTol = 1e-4;
// Grid gate for tangential roots of F^p(x) - x: a multiplier-1 tangency is
// locally quadratic, so the nearest grid value is ~curvature * (dx/2)^2.
constexpr double kTangentDetectTol = 1e-7;
constexpr double kTangentAcceptTol = 1e-10;
constexpr double kDedupTol = 1e-9;
constexpr double kLowerPeriodTol = 1e-9;
constexpr int kMaxRoots = 1000;
constexpr int kMaxTangentRefines = 4000;
constexpr int kHoldIterates = 10;

// ------------------------------------------------------------ summation

// Neumaier-compensated accumulator: Birkhoff sums over 1e6+ iterates must not
// drift, or constant-slope exponents (tent -> ln 2) miss their tight budget.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

// log|d| for the small integer step derivatives of the exact engine.
double log_abs_int(std::int64_t d) {
  static const std::vector<double>& table = *[] {
    auto* t = new std::vector<double>(1025, 0.0);
    for (std::size_t i = 1; i < t->size(); ++i) {
      (*t)[i] = std::log(static_cast<double>(i));
    }
    return t;
  }();
  const std::uint64_t a =
      d < 0 ? static_cast<std::uint64_t>(-d) : static_cast<std::uint64_t>(d);
  if (a < table.size()) return table[a];
  return std::log(static_cast<double>(a));
}

// ------------------------------------------------------------ threading

// Work units are independent and write only their own output slot, so the
// result is identical for any worker count; only wall time changes.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  int workers =
      threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int k = 0; k < workers; ++k) {
    pool.emplace_back([&] {
      try {
        for (int i; (i = next.fetch_add(1, std::memory_order_relaxed)) < count;) {
          fn(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count, std::memory_order_relaxed);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// --------------------------------------------------- per-seed indicator sweep

struct SeedSweep {
  LyapunovSeed lyap;
  std::vector<std::uint64_t> counts;
  double coverage = 0.0;
};

void finish_sweep(SeedSweep& out, const NeumaierSum& acc, std::uint64_t n,
                  std::uint64_t skipped, int bins) {
  out.lyap.skipped = skipped;
  out.lyap.reliable = skipped * 100 <= n;
  out.lyap.value = n > 0 ? acc.value() / static_cast<double>(n) : 0.0;
  std::size_t occupied = 0;
  for (auto c : out.counts) occupied += c > 0 ? 1 : 0;
  out.coverage = bins > 0 ? static_cast<double>(occupied) / bins : 0.0;
}

SeedSweep sweep_engine(const detail::ExactEngine& engine, double seed_value,
                       std::uint64_t n, std::uint64_t transient, int bins) {
  SeedSweep out;
  out.lyap.seed = seed_value;
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  std::int64_t p = detail::ExactEngine::seed_numerator(seed_value);
  for (std::uint64_t t = 0; t < transient; ++t) p = engine.step(p).value;
  NeumaierSum acc;
  std::uint64_t skipped = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto st = engine.step(p);
    auto bin = static_cast<std::int64_t>(
        static_cast<unsigned __int128>(p) * static_cast<unsigned __int128>(bins) /
        static_cast<unsigned __int128>(detail::kQ));
    if (bin >= bins) bin = bins - 1;
    ++out.counts[static_cast<std::size_t>(bin)];
    if (st.deriv == 0) {
      ++skipped;
    } else {
      acc.add(log_abs_int(st.deriv));
    }
    p = st.value;
  }
  finish_sweep(out, acc, n, skipped, bins);
  return out;
}

SeedSweep sweep_double(const MapExpr& map, double seed_value, std::uint64_t n,
                       std::uint64_t transient, int bins) {
  SeedSweep out;
  out.lyap.seed = seed_value;
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  double x = seed_value;
  for (std::uint64_t t = 0; t < transient; ++t) x = map_core::eval(map, x);
  NeumaierSum acc;
  std::uint64_t skipped = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    int bin = static_cast<int>(x * bins);
    if (bin >= bins) bin = bins - 1;
    if (bin < 0) bin = 0;
    ++out.counts[static_cast<std::size_t>(bin)];
    const double d = map_core::derivative(map, x);
    if (std::abs(d) < kDerivSkipTol) {
      ++skipped;
    } else {
      acc.add(std::log(std::abs(d)));
    }
    x = map_core::eval(map, x);
  }
  finish_sweep(out, acc, n, skipped, bins);
  return out;
}

std::vector<SeedSweep> run_sweeps(const MapExpr& map,
                                  const std::vector<double>& seeds,
                                  std::uint64_t n, std::uint64_t transient,
                                  int bins, int threads) {
  std::optional<detail::ExactEngine> engine;
  if (detail::ExactEngine::eligible(map)) engine.emplace(map);
  std::vector<SeedSweep> sweeps(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), threads, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    sweeps[idx] = engine
                      ? sweep_engine(*engine, seeds[idx], n, transient, bins)
                      : sweep_double(map, seeds[idx], n, transient, bins);
  });
  return sweeps;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v.front();
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

LyapunovSummary summarize_lyapunov(const std::vector<SeedSweep>& sweeps) {
  LyapunovSummary summary;
  summary.per_seed.reserve(sweeps.size());
  std::vector<double> reliable;
  for (const auto& sw : sweeps) {
    summary.per_seed.push_back(sw.lyap);
    if (sw.lyap.reliable) reliable.push_back(sw.lyap.value);
  }
  std::sort(reliable.begin(), reliable.end());
  if (!reliable.empty()) {
    summary.median = quantile_sorted(reliable, 0.5);
    summary.iqr = quantile_sorted(reliable, 0.75) - quantile_sorted(reliable, 0.25);
  }
  return summary;
}

// ------------------------------------------------------------- root scanning

using RealFn = std::function<double(double)>;

// Bisection on a bracketed sign change; returns the bracket end with the
// smaller residual, or nothing when the change runs through a jump.
std::optional<double> refine_crossing(const RealFn& g, double lo, double hi,
                                      double glo, double ghi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((glo < 0.0) != (gm < 0.0)) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  if (std::min(std::abs(glo), std::abs(ghi)) > kRootResidualTol) {
    return std::nullopt;
  }
  return std::abs(glo) <= std::abs(ghi) ? lo : hi;
}

// Golden-section minimum of |g| for tangential roots (no sign change).
double refine_minimum(const RealFn& g, double a, double b) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = std::abs(g(x1));
  double f2 = std::abs(g(x2));
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = std::abs(g(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = std::abs(g(x2));
    }
  }
  return 0.5 * (a + b);
}

struct RootScan {
  std::vector<double> roots;
  bool truncated = false;
  bool non_isolated = false;
};

// Grid scan for roots of g on [0,1]: exact grid zeros (with maximal runs of
// consecutive zeros recorded as non-isolated, represented by their ends),
// bisection-refined sign changes, and optional tangential local minima below
// `tangent_detect` refined down to kTangentAcceptTol.
RootScan scan_roots(const RealFn& g, int grid_n, double tangent_detect) {
  RootScan out;
  const int pts = grid_n + 1;
  std::vector<double> gv(static_cast<std::size_t>(pts));
  for (int j = 0; j < pts; ++j) {
    gv[static_cast<std::size_t>(j)] = g(static_cast<double>(j) / grid_n);
  }
  auto push = [&](double x) {
    if (static_cast<int>(out.roots.size()) >= kMaxRoots) {
      out.truncated = true;
      return false;
    }
    out.roots.push_back(x);
    return true;
  };

  int j = 0;
  while (j < pts) {
    if (gv[static_cast<std::size_t>(j)] == 0.0) {
      int k = j;
      while (k + 1 < pts && gv[static_cast<std::size_t>(k + 1)] == 0.0) ++k;
      if (k > j) {
        out.non_isolated = true;
        if (!push(static_cast<double>(j) / grid_n)) return out;
        if (!push(static_cast<double>(k) / grid_n)) return out;
      } else {
        if (!push(static_cast<double>(j) / grid_n)) return out;
      }
      j = k + 1;
    } else {
      ++j;
    }
  }

  for (int i = 0; i + 1 < pts; ++i) {
    const double a = gv[static_cast<std::size_t>(i)];
    const double b = gv[static_cast<std::size_t>(i + 1)];
    if (a == 0.0 || b == 0.0) continue;
    if ((a < 0.0) == (b < 0.0)) continue;
    const auto root = refine_crossing(g, static_cast<double>(i) / grid_n,
                                      static_cast<double>(i + 1) / grid_n, a, b);
    if (root && !push(*root)) return out;
  }

  int refines = 0;
  for (int i = 1; i + 1 < pts && refines < kMaxTangentRefines; ++i) {
    const double a = std::abs(gv[static_cast<std::size_t>(i)]);
    if (a == 0.0 || a >= tangent_detect) continue;
    if (std::abs(gv[static_cast<std::size_t>(i - 1)]) < a ||
        std::abs(gv[static_cast<std::size_t>(i + 1)]) < a) {
      continue;  // not a local minimum of |g|
    }
    const double gi = gv[static_cast<std::size_t>(i)];
    if ((gv[static_cast<std::size_t>(i - 1)] < 0.0) != (gi < 0.0) ||
        (gv[static_cast<std::size_t>(i + 1)] < 0.0) != (gi < 0.0)) {
      continue;  // a sign change; the crossing pass owns it
    }
    ++refines;
    const double x = refine_minimum(g, static_cast<double>(i - 1) / grid_n,
                                    static_cast<double>(i + 1) / grid_n);
    if (std::abs(g(x)) < kTangentAcceptTol && !push(x)) return out;
  }

  std::sort(out.roots.begin(), out.roots.end());
  std::vector<double> dedup;
  dedup.reserve(out.roots.size());
  for (double x : out.roots) {
    if (dedup.empty() || x - dedup.back() > kDedupTol) dedup.push_back(x);
  }
  out.roots = std::move(dedup);
  return out;
}

std::string stability_str(Stability s) { return to_string(s); }

}  // namespace

// ----------------------------------------------------------------- orbits

Orbit iterate_orbit(const MapExpr& map, double seed, std::uint64_t n,
                    std::uint64_t transient) {
  Orbit orbit;
  orbit.seed = seed;
  orbit.transient = transient;
  orbit.points.reserve(static_cast<std::size_t>(n));
  double x = seed;
  for (std::uint64_t t = 0; t < transient; ++t) x = map_core::eval(map, x);
  for (std::uint64_t i = 0; i < n; ++i) {
    orbit.points.push_back(x);
    x = map_core::eval(map, x);
  }
  return orbit;
}

// ----------------------------------------------------------- fixed points

FixedPointScan find_fixed_points(const MapExpr& map, int grid_n, int period) {
  const RealFn displaced = [&map, period](double x) {
    double y = x;
    for (int i = 0; i < period; ++i) y = map_core::eval(map, y);
    return y - x;
  };
  const RootScan scan = scan_roots(displaced, grid_n, kTangentDetectTol);

  FixedPointScan out;
  out.truncated = scan.truncated;
  for (double x : scan.roots) {
    if (period > 1) {
      bool lower = false;
      for (int d = 1; d < period && !lower; ++d) {
        if (period % d != 0) continue;
        double y = x;
        for (int i = 0; i < d; ++i) y = map_core::eval(map, y);
        lower = std::abs(y - x) < kLowerPeriodTol;
      }
      if (lower) continue;
    }
    FixedPointInfo info;
    info.location = x;
    info.period = period;
    double m = 1.0;
    double y = x;
    for (int i = 0; i < period; ++i) {
      m *= map_core::derivative(map, y);
      y = map_core::eval(map, y);
    }
    info.multiplier = std::abs(m);
    if (info.multiplier < 1.0 - 1e-6) {
      info.stability = Stability::Stable;
    } else if (info.multiplier > 1.0 + 1e-6) {
      info.stability = Stability::Unstable;
    } else {
      info.stability = Stability::Marginal;
    }
    out.points.push_back(info);
  }
  return out;
}

// --------------------------------------------------------------- zero set

ZeroSetResult zero_set(const MapExpr& map, int grid_n) {
  RealFn g;
  double tangent_detect;
  if (map.node().kind == map_core::Kind::Xor) {
    // |f - g| vanishes exactly where f - g does; the signed difference turns
    // every touching zero into a detectable crossing.
    const MapExpr left(map.node().left);
    const MapExpr right(map.node().right);
    g = [left, right](double x) {
      return map_core::eval(left, x) - map_core::eval(right, x);
    };
    tangent_detect = kTangentDetectTol;
  } else {
    // Generic maps stay >= 0, so every zero is a touch; use a loose grid gate
    // and let the refined-minimum acceptance filter do the deciding.
    g = [map](double x) { return map_core::eval(map, x); };
    tangent_detect = 1e-3;
  }
  const RootScan scan = scan_roots(g, grid_n, tangent_detect);
  ZeroSetResult out;
  out.points = scan.roots;
  out.non_isolated = scan.non_isolated;
  return out;
}

// ------------------------------------------------------------------ basins

BasinResult basin_map(const MapExpr& map, const std::vector<double>& targets,
                      int grid_n, int max_iter, double tol, int threads) {
  const int pts = grid_n + 1;
  BasinResult out;
  out.cells.assign(static_cast<std::size_t>(pts), -1);
  parallel_for(pts, threads, [&](int j) {
    double x = static_cast<double>(j) / grid_n;
    std::vector<int> hold(targets.size(), 0);
    for (int it = 0; it < max_iter; ++it) {
      bool classified = false;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        if (std::abs(x - targets[t]) < tol) {
          if (++hold[t] >= kHoldIterates) {
            out.cells[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(t);
            classified = true;
            break;
          }
        } else {
          hold[t] = 0;
        }
      }
      if (classified) break;
      x = map_core::eval(map, x);
    }
  });
  out.fractions.assign(targets.size(), 0.0);
  std::size_t unresolved = 0;
  for (auto cell : out.cells) {
    if (cell < 0) {
      ++unresolved;
    } else {
      out.fractions[static_cast<std::size_t>(cell)] += 1.0;
    }
  }
  for (auto& f : out.fractions) f /= pts;
  out.unresolved = static_cast<double>(unresolved) / pts;
  return out;
}

// -------------------------------------------------------------- indicators

LyapunovSummary lyapunov(const MapExpr& map, const std::vector<double>& seeds,
                         std::uint64_t n, std::uint64_t transient, int threads) {
  return summarize_lyapunov(run_sweeps(map, seeds, n, transient, 1, threads));
}

double coverage(const MapExpr& map, const std::vector<double>& seeds,
                std::uint64_t n, int bins, std::uint64_t transient,
                int threads) {
  double best = 0.0;
  for (const auto& sw : run_sweeps(map, seeds, n, transient, bins, threads)) {
    best = std::max(best, sw.coverage);
  }
  return best;
}

std::vector<double> invariant_histogram(const MapExpr& map,
                                        const std::vector<double>& seeds,
                                        std::uint64_t n, int bins,
                                        std::uint64_t transient, int threads) {
  const auto sweeps = run_sweeps(map, seeds, n, transient, bins, threads);
  std::vector<std::uint64_t> pooled(static_cast<std::size_t>(bins), 0);
  for (const auto& sw : sweeps) {
    for (std::size_t b = 0; b < pooled.size(); ++b) pooled[b] += sw.counts[b];
  }
  std::uint64_t total = 0;
  for (auto c : pooled) total += c;
  std::vector<double> densities(pooled.size(), 0.0);
  if (total > 0) {
    for (std::size_t b = 0; b < pooled.size(); ++b) {
      densities[b] = static_cast<double>(pooled[b]) / static_cast<double>(total);
    }
  }
  return densities;
}

SensitivityEstimate sensitivity_estimate(const MapExpr& map,
                                         const std::vector<double>& seeds,
                                         double delta0, int steps) {
  SensitivityEstimate out;
  out.delta0 = delta0;
  out.steps = steps;
  if (seeds.empty()) return out;
  int exceeded = 0;
  for (double u : seeds) {
    double x = u;
    double y = u + delta0;
    if (y > 1.0) {  // keep the perturbed pair inside [0,1]
      x = u - delta0;
      y = u;
    }
    for (int k = 0; k < steps; ++k) {
      x = map_core::eval(map, x);
      y = map_core::eval(map, y);
      if (std::abs(x - y) > out.threshold) {
        ++exceeded;
        break;
      }
    }
  }
  out.fraction_exceeding = static_cast<double>(exceeded) /
                           static_cast<double>(seeds.size());
  return out;
}

// ----------------------------------------------------------------- verdict

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Chaotic:
      return "Chaotic";
    case Verdict::NonChaotic:
      return "NonChaotic";
    default:
      return "Inconclusive";
  }
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable:
      return "Stable";
    case Stability::Unstable:
      return "Unstable";
    default:
      return "Marginal";
  }
}

Verdict verdict(const DiagnosticsReport& report) {
  const VerdictThresholds& th = report.config.thresholds;
  const std::optional<double>& median = report.lyapunov.median;
  bool any_stable = false;
  bool stable_with_basin = false;
  for (const auto& fp : report.fixed_points) {
    if (fp.stability != Stability::Stable) continue;
    any_stable = true;
    if (fp.basin_fraction && *fp.basin_fraction >= th.basin_min) {
      stable_with_basin = true;
    }
  }
  if (median && *median > th.lyapunov_chaotic &&
      report.coverage >= th.coverage_min && !any_stable) {
    return Verdict::Chaotic;
  }
  if (stable_with_basin) return Verdict::NonChaotic;
  if (median && *median < th.lyapunov_nonchaotic) return Verdict::NonChaotic;
  // Orbits collapsed onto a point or short cycle: not transitive.
  if (report.coverage <= th.coverage_collapse) return Verdict::NonChaotic;
  // Expanding but confined to a proper subinterval: not transitive on [0,1].
  if (median && *median > th.lyapunov_chaotic &&
      report.coverage < th.coverage_confined) {
    return Verdict::NonChaotic;
  }
  return Verdict::Inconclusive;
}

// ------------------------------------------------------------ full report

std::vector<double> derive_seeds(std::uint64_t base_seed, int count) {
  std::vector<double> seeds(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    seeds[static_cast<std::size_t>(i)] =
        orbit_seed(base_seed, static_cast<std::uint64_t>(i));
  }
  return seeds;
}

DiagnosticsReport run_diagnostics(const MapExpr& map, const DiagConfig& config) {
  DiagnosticsReport rep;
  rep.expression = map_core::to_string(map);
  rep.config = config;

  const auto seeds = derive_seeds(config.base_seed, config.seeds);
  const auto sweeps = run_sweeps(map, seeds, config.iterates, config.transient,
                                 config.bins, config.threads);
  rep.lyapunov = summarize_lyapunov(sweeps);

  std::vector<std::uint64_t> pooled(static_cast<std::size_t>(config.bins), 0);
  for (const auto& sw : sweeps) {
    rep.coverage = std::max(rep.coverage, sw.coverage);
    for (std::size_t b = 0; b < pooled.size(); ++b) pooled[b] += sw.counts[b];
  }
  std::uint64_t total = 0;
  for (auto c : pooled) total += c;
  rep.histogram.assign(pooled.size(), 0.0);
  if (total > 0) {
    for (std::size_t b = 0; b < pooled.size(); ++b) {
      rep.histogram[b] = static_cast<double>(pooled[b]) / static_cast<double>(total);
    }
  }

  rep.sensitivity = sensitivity_estimate(map, seeds, config.sensitivity_delta0,
                                         config.sensitivity_steps);

  rep.branches = branch_analysis::full_branch_decomposition(map);
  rep.distortion_n1 = branch_analysis::distortion_bound(map, rep.branches, 1);
  rep.distortion_n2 = branch_analysis::distortion_bound(map, rep.branches, 2);
  rep.zero_set = zero_set(map, config.grid_n);

  // Period-1 points are always reported; higher periods only when they could
  // veto chaos (stable or marginal).
  for (int p = 1; p <= config.max_period; ++p) {
    FixedPointScan scan = find_fixed_points(map, config.grid_n, p);
    rep.fixed_points_truncated = rep.fixed_points_truncated || scan.truncated;
    for (auto& fp : scan.points) {
      if (p == 1 || fp.stability != Stability::Unstable) {
        rep.fixed_points.push_back(fp);
      }
    }
  }

  std::vector<double> targets;
  std::vector<std::size_t> target_entry;
  for (std::size_t i = 0; i < rep.fixed_points.size(); ++i) {
    const auto& fp = rep.fixed_points[i];
    if (fp.period == 1 && fp.stability == Stability::Stable) {
      targets.push_back(fp.location);
      target_entry.push_back(i);
    }
  }
  if (!targets.empty()) {
    const BasinResult basins =
        basin_map(map, targets, config.grid_n, config.basin_max_iter,
                  config.basin_tol, config.threads);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      rep.fixed_points[target_entry[t]].basin_fraction = basins.fractions[t];
    }
  }

  rep.verdict = verdict(rep);
  return rep;
}

nlohmann::ordered_json report_to_json(const DiagnosticsReport& rep) {
  using J = nlohmann::ordered_json;
  J j;
  j["schema_version"] = 1;
  j["expression"] = rep.expression;

  J cfg;
  cfg["base_seed"] = rep.config.base_seed;
  cfg["seeds"] = rep.config.seeds;
  cfg["iterates"] = rep.config.iterates;
  cfg["transient"] = rep.config.transient;
  cfg["bins"] = rep.config.bins;
  cfg["grid"] = rep.config.grid_n;
  cfg["max_period"] = rep.config.max_period;
  cfg["basin_max_iter"] = rep.config.basin_max_iter;
  cfg["basin_tol"] = rep.config.basin_tol;
  cfg["sensitivity"] = J{{"delta0", rep.config.sensitivity_delta0},
                         {"steps", rep.config.sensitivity_steps}};
  cfg["thresholds"] =
      J{{"lyapunov_chaotic", rep.config.thresholds.lyapunov_chaotic},
        {"lyapunov_nonchaotic", rep.config.thresholds.lyapunov_nonchaotic},
        {"coverage_min", rep.config.thresholds.coverage_min},
        {"basin_min", rep.config.thresholds.basin_min},
        {"coverage_collapse", rep.config.thresholds.coverage_collapse},
        {"coverage_confined", rep.config.thresholds.coverage_confined}};
  j["config"] = cfg;

  J ly;
  if (rep.lyapunov.median) {
    ly["median"] = *rep.lyapunov.median;
  } else {
    ly["median"] = nullptr;
  }
  ly["iqr"] = rep.lyapunov.iqr;
  J per_seed = J::array();
  for (const auto& s : rep.lyapunov.per_seed) {
    per_seed.push_back(J{{"seed", s.seed},
                         {"value", s.value},
                         {"skipped", s.skipped},
                         {"reliable", s.reliable}});
  }
  ly["per_seed"] = std::move(per_seed);
  ly["sensitivity"] = J{{"delta0", rep.sensitivity.delta0},
                        {"steps", rep.sensitivity.steps},
                        {"threshold", rep.sensitivity.threshold},
                        {"fraction_exceeding", rep.sensitivity.fraction_exceeding}};
  j["lyapunov"] = std::move(ly);

  j["coverage"] = rep.coverage;

  J fps = J::array();
  for (const auto& fp : rep.fixed_points) {
    J entry{{"location", fp.location},
            {"multiplier", fp.multiplier},
            {"stability", stability_str(fp.stability)},
            {"period", fp.period}};
    if (fp.basin_fraction) {
      entry["basin_fraction"] = *fp.basin_fraction;
    } else {
      entry["basin_fraction"] = nullptr;
    }
    fps.push_back(std::move(entry));
  }
  j["fixed_points"] =
      J{{"points", std::move(fps)}, {"truncated", rep.fixed_points_truncated}};

  j["zero_set"] = J{{"points", rep.zero_set.points},
                    {"non_isolated", rep.zero_set.non_isolated}};
  j["histogram"] = rep.histogram;

  J branch_list = J::array();
  for (const auto& b : rep.branches.branches) {
    std::string mono = b.monotonicity == branch_analysis::Monotonicity::Increasing
                           ? "increasing"
                       : b.monotonicity == branch_analysis::Monotonicity::Decreasing
                           ? "decreasing"
                           : "flat";
    branch_list.push_back(J{{"interval", J::array({b.interval.lo, b.interval.hi})},
                            {"monotonicity", mono},
                            {"image", J::array({b.image.lo, b.image.hi})},
                            {"full", b.is_full}});
  }
  j["branches"] = J{{"count", static_cast<int>(rep.branches.branches.size())},
                    {"full_count", rep.branches.full_count},
                    {"exact", rep.branches.exact},
                    {"list", std::move(branch_list)}};

  const auto distortion_json = [](const branch_analysis::DistortionEstimate& d) {
    J per_branch = J::array();
    for (const auto& b : d.per_branch) {
      per_branch.push_back(J{{"value", b.value}, {"infinite", b.infinite}});
    }
    return J{{"sup", d.sup},
             {"any_infinite", d.any_infinite},
             {"per_branch", std::move(per_branch)}};
  };
  j["distortion"] = J{{"n1", distortion_json(rep.distortion_n1)},
                      {"n2", distortion_json(rep.distortion_n2)}};

  j["verdict"] = to_string(rep.verdict);
  if (rep.fixtures_match) {
    j["fixtures_match"] = *rep.fixtures_match;
  } else {
    j["fixtures_match"] = nullptr;
  }
  return j;
}

}  // namespace xormaps::chaos_diagnostics
