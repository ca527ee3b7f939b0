#pragma once

#include <string>
#include <vector>

#include "latsim/sim_engine.hpp"

namespace latsim {

/// One polyline on a plot.
struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
};

/// Renders series into a self-contained SVG line plot with axes and legend.
/// Long series are decimated to keep files small.
std::string render_svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<PlotSeries>& series,
                            bool equal_axes = false);

/// Writes the four standard run plots (trajectory vs reference, e_h1, e_h3,
/// steering) into dir. Returns the file names written.
std::vector<std::string> write_run_plots(const SimLog& log, const std::string& dir);

}  // namespace latsim
