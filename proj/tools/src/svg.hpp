#pragma once

#include <string>
#include <vector>

namespace sievevar::app {

struct PlotSeries {
  std::string method;
  std::vector<double> horizon;
  std::vector<double> coverage;
  std::vector<double> avg_length;
};

struct PlotOptions {
  double p = 10.0;      // position of the vertical rule
  double level = 0.95;  // dashed reference in the coverage panel
  std::string title;
};

/// Two-panel chart: coverage and average length against horizon.
[[nodiscard]] std::string render_mc_svg(const std::vector<PlotSeries>& series,
                                        const PlotOptions& options);

}  // namespace sievevar::app
