#pragma once

#include <string>
#include <vector>

namespace stem::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG line chart: axes, tick labels, one polyline per series, legend.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, int width = 960,
                      int height = 600);

} // namespace stem::svg
