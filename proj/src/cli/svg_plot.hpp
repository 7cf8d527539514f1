#pragma once

#include <string>
#include <vector>

namespace rislink::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// Static line plot: axes with ticks, one polyline per series, a legend.
// Non-positive values are skipped on a log axis.
std::string render_svg(const PlotSpec& spec);

}  // namespace rislink::cli
