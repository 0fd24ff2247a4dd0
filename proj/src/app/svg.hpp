#pragma once

#include "parity/stats.hpp"

#include <string>
#include <vector>

namespace parity::app {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool markers_only = false;
};

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Static SVG with axes, ticks and one polyline (or marker set) per series.
std::string line_plot_svg(const PlotLabels& labels, const std::vector<Series>& series);

/// Static SVG box-and-whisker chart, one box per summary, outliers as dots.
std::string box_plot_svg(const PlotLabels& labels, const std::vector<BoxWhiskerSummary>& boxes);

}  // namespace parity::app
