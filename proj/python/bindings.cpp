#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/branch_analysis.hpp"
#include "xormaps/chaos_diagnostics.hpp"
#include "xormaps/fuzzy_combinators.hpp"
#include "xormaps/map_core.hpp"

namespace py = pybind11;

namespace {

using xormaps::map_core::MapExpr;

MapExpr parse(const std::string& text) {
  return xormaps::map_core::parse_map_expr(text);
}

xormaps::chaos_diagnostics::DiagConfig make_config(std::uint64_t base_seed,
                                                   int seeds,
                                                   std::uint64_t iterates,
                                                   std::uint64_t transient,
                                                   int bins, int grid_n,
                                                   int threads) {
  xormaps::chaos_diagnostics::DiagConfig config;
  config.base_seed = base_seed;
  config.seeds = seeds;
  config.iterates = iterates;
  config.transient = transient;
  config.bins = bins;
  config.grid_n = grid_n;
  config.threads = threads;
  return config;
}

}  // namespace

PYBIND11_MODULE(_xormaps, m) {
  m.doc() = "fuzzy-XOR interval map laboratory (C++ core)";

  py::register_exception<xormaps::map_core::ParseError>(m, "ParseError",
                                                        PyExc_ValueError);
  py::register_exception<xormaps::fuzzy_combinators::NotPiecewiseAffine>(
      m, "NotPiecewiseAffine", PyExc_ValueError);

  m.def("canonical", [](const std::string& text) {
    return xormaps::map_core::to_string(parse(text));
  });

  m.def("eval_map", [](const std::string& text, double x) {
    return xormaps::map_core::eval(parse(text), x);
  });

  m.def("derivative", [](const std::string& text, double x) {
    return xormaps::map_core::derivative(parse(text), x);
  });

  m.def("to_piecewise_affine_json", [](const std::string& text) {
    return xormaps::fuzzy_combinators::to_piecewise_affine(parse(text))
        .to_json()
        .dump();
  });

  m.def("pa_eval_json", [](const std::string& pa_json, double x) {
    const auto pa = xormaps::fuzzy_combinators::PiecewiseAffineMap::from_json(
        nlohmann::json::parse(pa_json));
    return xormaps::fuzzy_combinators::pa_eval(pa, x);
  });

  m.def("branches_json", [](const std::string& text) {
    const auto d =
        xormaps::branch_analysis::full_branch_decomposition(parse(text));
    nlohmann::ordered_json doc;
    doc["count"] = d.branches.size();
    doc["full_count"] = d.full_count;
    doc["exact"] = d.exact;
    auto list = nlohmann::ordered_json::array();
    for (const auto& b : d.branches) {
      list.push_back(nlohmann::ordered_json{
          {"interval", {b.interval.lo, b.interval.hi}},
          {"monotonicity",
           b.monotonicity == xormaps::branch_analysis::Monotonicity::Increasing
               ? "increasing"
           : b.monotonicity ==
                   xormaps::branch_analysis::Monotonicity::Decreasing
               ? "decreasing"
               : "flat"},
          {"image", {b.image.lo, b.image.hi}},
          {"full", b.is_full}});
    }
    doc["list"] = std::move(list);
    return doc.dump();
  });

  m.def(
      "diagnose_json",
      [](const std::string& text, std::uint64_t base_seed, int seeds,
         std::uint64_t iterates, std::uint64_t transient, int bins, int grid_n,
         int threads) {
        const auto config = make_config(base_seed, seeds, iterates, transient,
                                        bins, grid_n, threads);
        const auto report =
            xormaps::chaos_diagnostics::run_diagnostics(parse(text), config);
        return xormaps::chaos_diagnostics::report_to_json(report).dump();
      },
      py::arg("text"), py::arg("base_seed") = 1, py::arg("seeds") = 8,
      py::arg("iterates") = 100000, py::arg("transient") = 1000,
      py::arg("bins") = 1000, py::arg("grid_n") = 2000, py::arg("threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def("catalog", [] {
    std::vector<std::string> ids;
    for (const auto& e : xormaps::map_core::catalog_entries()) {
      ids.push_back(e.id);
    }
    return ids;
  });
}
