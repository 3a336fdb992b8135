#pragma once

#include <string>
#include <vector>

#include "vrs/grid.hpp"

namespace vrs {

struct SvgSeries {
    std::string label;
    std::string color;  // e.g. "#1f77b4"
    const std::vector<double>* values = nullptr;
};

/// Minimal deterministic line plot: axes box, ticks, one polyline per series,
/// a small legend. No external dependencies.
std::string render_line_plot(const FrequencyGrid& grid,
                             const std::vector<SvgSeries>& series,
                             const std::string& x_label,
                             const std::string& y_label);

}  // namespace vrs
