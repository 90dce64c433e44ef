#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "xormaps/cli_reporting.hpp"

namespace xormaps::cli_reporting {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 640;
constexpr int kMargin = 48;

double px(double x) { return kMargin + x * (kWidth - 2 * kMargin); }
double py(double y) { return kHeight - kMargin - y * (kHeight - 2 * kMargin); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void line(std::ostringstream& s, double x1, double y1, double x2, double y2,
          const std::string& style) {
  s << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\""
    << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" " << style << "/>\n";
}

void axes(std::ostringstream& s) {
  s << "<rect x=\"" << fmt(px(0)) << "\" y=\"" << fmt(py(1)) << "\" width=\""
    << fmt(px(1) - px(0)) << "\" height=\"" << fmt(py(0) - py(1))
    << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    line(s, px(t), py(0), px(t), py(0) + 5, "stroke=\"#333\"");
    line(s, px(0) - 5, py(t), px(0), py(t), "stroke=\"#333\"");
  }
  for (double t : {0.0, 0.5, 1.0}) {
    s << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(py(0) + 20)
      << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\">" << t
      << "</text>\n";
    s << "<text x=\"" << fmt(px(0) - 10) << "\" y=\"" << fmt(py(t) + 4)
      << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333\">" << t
      << "</text>\n";
  }
}

void overlays(std::ostringstream& s, const PlotSpec& spec) {
  for (const auto& name : spec.overlays) {
    if (name == "diagonal") {
      line(s, px(0), py(0), px(1), py(1),
           "stroke=\"#999\" stroke-dasharray=\"4 3\"");
    } else if (name == "half") {
      line(s, px(0), py(0.5), px(1), py(0.5),
           "stroke=\"#b66\" stroke-dasharray=\"6 3\"");
    }
  }
}

// Polyline segments of the sampled graph, split at jumps so discontinuities
// are not drawn as vertical strokes.
void draw_graph(std::ostringstream& s,
                const std::vector<std::pair<double, double>>& pts,
                const std::string& color) {
  std::ostringstream seg;
  int count = 0;
  auto flush = [&] {
    if (count >= 2) {
      s << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << seg.str() << "\"/>\n";
    }
    seg.str("");
    count = 0;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && std::abs(pts[i].second - pts[i - 1].second) > 0.5 &&
        pts[i].first - pts[i - 1].first < 0.01) {
      flush();
    }
    seg << fmt(px(pts[i].first)) << "," << fmt(py(pts[i].second)) << " ";
    ++count;
  }
  flush();
}

void draw_cobweb(std::ostringstream& s, const std::vector<double>& orbit) {
  if (orbit.size() < 2) return;
  std::ostringstream path;
  path << "M " << fmt(px(orbit[0])) << " " << fmt(py(orbit[0]));
  for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
    path << " L " << fmt(px(orbit[i])) << " " << fmt(py(orbit[i + 1]));
    path << " L " << fmt(px(orbit[i + 1])) << " " << fmt(py(orbit[i + 1]));
  }
  s << "<path fill=\"none\" stroke=\"#c22\" stroke-width=\"1\" d=\""
    << path.str() << "\"/>\n";
}

void draw_histogram(std::ostringstream& s, const std::vector<double>& dens) {
  if (dens.empty()) return;
  const double peak = std::max(*std::max_element(dens.begin(), dens.end()),
                               1e-300);
  const double w = (px(1) - px(0)) / static_cast<double>(dens.size());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const double h = dens[i] / peak;
    if (h <= 0.0) continue;
    s << "<rect x=\"" << fmt(px(0) + w * static_cast<double>(i)) << "\" y=\""
      << fmt(py(h)) << "\" width=\"" << fmt(w) << "\" height=\""
      << fmt(py(0) - py(h)) << "\" fill=\"#4a7\" stroke=\"none\"/>\n";
  }
}

void draw_basin(std::ostringstream& s, const std::vector<std::int32_t>& cells,
                int targets) {
  if (cells.empty()) return;
  static const char* kPalette[] = {"#4a7", "#47a", "#a47", "#aa4",
                                   "#4aa", "#a4a"};
  const double w = (px(1) - px(0)) / static_cast<double>(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const char* color =
        cells[i] < 0 ? "#ddd" : kPalette[static_cast<std::size_t>(cells[i]) % 6];
    s << "<rect x=\"" << fmt(px(0) + w * static_cast<double>(i)) << "\" y=\""
      << fmt(py(1)) << "\" width=\"" << fmt(w + 0.5) << "\" height=\""
      << fmt(py(0) - py(1)) << "\" fill=\"" << color << "\"/>\n";
  }
  (void)targets;
}

}  // namespace

std::string render_plot(const PlotSpec& spec, const PlotData& data) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
    << kHeight << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<title>" << xml_escape(spec.expression) << "</title>\n";

  switch (spec.kind) {
    case PlotSpec::Kind::Basin:
      draw_basin(s, data.basin_cells, data.basin_targets);
      break;
    case PlotSpec::Kind::Histogram:
      draw_histogram(s, data.histogram);
      break;
    case PlotSpec::Kind::Cobweb:
      draw_graph(s, data.graph, "#26c");
      draw_cobweb(s, data.orbit);
      break;
    case PlotSpec::Kind::Graph:
      draw_graph(s, data.graph, "#26c");
      break;
  }

  overlays(s, spec);
  axes(s);
  s << "<text x=\"" << fmt(kWidth / 2.0) << "\" y=\"" << fmt(kMargin / 2.0 + 4)
    << "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#111\">"
    << xml_escape(spec.expression) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace xormaps::cli_reporting
