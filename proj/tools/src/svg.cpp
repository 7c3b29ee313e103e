#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace sievevar::app {

namespace {

constexpr double kPanelWidth = 440.0;
constexpr double kPanelHeight = 320.0;
constexpr double kLeft = 60.0;
constexpr double kTop = 50.0;
constexpr double kGap = 90.0;
constexpr double kWidth = kLeft + 2.0 * kPanelWidth + kGap + 30.0;
constexpr double kHeight = kTop + kPanelHeight + 110.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo;
  double hi;
  double from;  // pixel of lo
  double to;    // pixel of hi

  [[nodiscard]] double operator()(double v) const {
    return from + (v - lo) / (hi - lo) * (to - from);
  }
};

struct Panel {
  std::string id;
  std::string label;
  Axis x;
  Axis y;
  std::function<const std::vector<double>&(const PlotSeries&)> values;
};

void draw_panel(std::ostringstream& os, const Panel& panel, const std::vector<PlotSeries>& series,
                const PlotOptions& options, bool nominal) {
  const double x0 = panel.x.from;
  const double x1 = panel.x.to;
  const double y0 = panel.y.from;  // bottom
  const double y1 = panel.y.to;    // top
  os << "<g class=\"panel\" id=\"" << panel.id << "\">\n";
  os << "<text class=\"panel-title\" x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y1 - 12)
     << "\" text-anchor=\"middle\">" << escape(panel.label) << "</text>\n";
  os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
     << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    const double v = panel.y.lo + (panel.y.hi - panel.y.lo) * k / 5.0;
    const double py = panel.y(v);
    os << "<line class=\"tick\" x1=\"" << num(x0 - 4) << "\" y1=\"" << num(py) << "\" x2=\""
       << num(x0) << "\" y2=\"" << num(py) << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << num(x0 - 7) << "\" y=\"" << num(py + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(v) << "</text>\n";
  }
  const double xstep = std::max(1.0, std::ceil((panel.x.hi - panel.x.lo) / 6.0));
  for (double v = panel.x.lo; v <= panel.x.hi + 1e-9; v += xstep) {
    const double px = panel.x(v);
    os << "<line class=\"tick\" x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\""
       << num(px) << "\" y2=\"" << num(y0 + 4) << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 17)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(v) << "</text>\n";
  }
  os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y0 + 36)
     << "\" text-anchor=\"middle\" font-size=\"12\">horizon i</text>\n";

  if (nominal) {
    const double py = panel.y(options.level);
    os << "<line class=\"nominal-level\" x1=\"" << num(x0) << "\" y1=\"" << num(py) << "\" x2=\""
       << num(x1) << "\" y2=\"" << num(py)
       << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
  }
  const double px = panel.x(options.p);
  os << "<line class=\"p-marker\" x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\""
     << num(px) << "\" y2=\"" << num(y1) << "\" stroke=\"#000\" stroke-width=\"1.5\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& values = panel.values(series[s]);
    os << "<polyline class=\"series\" data-method=\"" << escape(series[s].method)
       << "\" fill=\"none\" stroke=\"" << kPalette[s % std::size(kPalette)]
       << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
      os << (i ? " " : "") << num(panel.x(series[s].horizon[i])) << ','
         << num(panel.y(values[i]));
    }
    os << "\"/>\n";
  }
  os << "</g>\n";
}

}  // namespace

std::string render_mc_svg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  double h_max = options.p;
  double cov_min = options.level;
  double len_max = 0.0;
  for (const auto& s : series) {
    for (double h : s.horizon) h_max = std::max(h_max, h);
    for (double c : s.coverage) cov_min = std::min(cov_min, c);
    for (double l : s.avg_length) len_max = std::max(len_max, l);
  }
  if (h_max <= 0.0) {
    h_max = 1.0;
  }
  const double cov_lo = std::max(0.0, std::floor((cov_min - 0.05) * 20.0) / 20.0);
  const double len_hi = len_max > 0.0 ? len_max * 1.05 : 1.0;

  const double bottom = kTop + kPanelHeight;
  const Panel coverage{"coverage", "Coverage",
                       {0.0, h_max, kLeft, kLeft + kPanelWidth},
                       {cov_lo, 1.0, bottom, kTop},
                       [](const PlotSeries& s) -> const std::vector<double>& { return s.coverage; }};
  const double left2 = kLeft + kPanelWidth + kGap;
  const Panel length{"length", "Average length",
                     {0.0, h_max, left2, left2 + kPanelWidth},
                     {0.0, len_hi, bottom, kTop},
                     [](const PlotSeries& s) -> const std::vector<double>& { return s.avg_length; }};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
     << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight)
     << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  if (!options.title.empty()) {
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(options.title) << "</text>\n";
  }
  draw_panel(os, coverage, series, options, true);
  draw_panel(os, length, series, options, false);

  os << "<g class=\"legend\">\n";
  double lx = kLeft;
  const double ly = kHeight - 25.0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 9) << "\" width=\"14\" height=\"4\" fill=\""
       << kPalette[s % std::size(kPalette)] << "\"/>\n";
    os << "<text x=\"" << num(lx + 20) << "\" y=\"" << num(ly - 3) << "\" font-size=\"12\">"
       << escape(series[s].method) << "</text>\n";
    lx += 40.0 + 8.0 * static_cast<double>(series[s].method.size());
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace sievevar::app
