#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/svg_plot.hpp"
#include "rislink/performance.hpp"

namespace rislink::cli {

struct FigureTable {
  std::vector<std::string> metadata;  // written as '# ' lines before the header
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  PlotSpec plot;
};

bool is_figure_name(const std::string& name);

// fig2: ASEP for N = 5, K = 1, sigma2 in {1/2, 1, 2}.
// fig3 / fig4: capacity with and without transmitter CSI for sigma2 = 1/2,
// K in {0, 1, 5, 10}, N = 2 / N = 5.
FigureTable make_figure(const std::string& name, const std::vector<double>& snr_db,
                        const Modulation& mod, int jobs);

void write_figure_csv(std::ostream& out, const FigureTable& table);

}  // namespace rislink::cli
