#pragma once

#include "mdcrow/image/raster.hpp"

#include <string>
#include <vector>

namespace mdcrow::image {

struct Line {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Line> lines;
    bool markers = false;
    int width = 640;
    int height = 420;
};

Image render_line_plot(const LinePlot& plot);

struct BarGroup {
    std::string name;
    std::vector<double> values;  // one per category
};

struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> categories;
    std::vector<BarGroup> groups;
    int width = 640;
    int height = 420;
};

Image render_bar_chart(const BarChart& chart);

// Roughly five round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

} // namespace mdcrow::image
