#include "vrs/svg.hpp"

#include <algorithm>
#include <cmath>

#include "vrs/csv.hpp"

namespace vrs {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 20.0;
constexpr double kMarginB = 50.0;

std::string num(double v) {
    // Fixed short formatting for coordinates keeps files compact and stable.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string render_line_plot(const FrequencyGrid& grid,
                             const std::vector<SvgSeries>& series,
                             const std::string& x_label,
                             const std::string& y_label) {
    double ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const SvgSeries& s : series) {
        for (double v : *s.values) {
            if (first) {
                ymin = ymax = v;
                first = false;
            } else {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (first) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    auto x_of = [&](double x) {
        return kMarginL + plot_w * (x - grid.start) / (grid.stop - grid.start);
    };
    auto y_of = [&](double y) {
        return kMarginT + plot_h * (1.0 - (y - ymin) / (ymax - ymin));
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
           "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
           " " + num(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" fill=\"white\"/>\n";
    svg += "<rect x=\"" + num(kMarginL) + "\" y=\"" + num(kMarginT) +
           "\" width=\"" + num(plot_w) + "\" height=\"" + num(plot_h) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        const double fx =
            grid.start + (grid.stop - grid.start) * t / double(n_ticks);
        const double px = x_of(fx);
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(kMarginT + plot_h) +
               "\" x2=\"" + num(px) + "\" y2=\"" +
               num(kMarginT + plot_h + 6.0) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(px) + "\" y=\"" +
               num(kMarginT + plot_h + 20.0) +
               "\" font-size=\"12\" text-anchor=\"middle\">" +
               format_double(fx) + "</text>\n";

        const double fy = ymin + (ymax - ymin) * t / double(n_ticks);
        const double py = y_of(fy);
        svg += "<line x1=\"" + num(kMarginL - 6.0) + "\" y1=\"" + num(py) +
               "\" x2=\"" + num(kMarginL) + "\" y2=\"" + num(py) +
               "\" stroke=\"black\"/>\n";
        char ybuf[32];
        std::snprintf(ybuf, sizeof(ybuf), "%.3g", fy);
        svg += "<text x=\"" + num(kMarginL - 10.0) + "\" y=\"" + num(py + 4.0) +
               "\" font-size=\"12\" text-anchor=\"end\">" + ybuf + "</text>\n";
    }
    svg += "<text x=\"" + num(kMarginL + plot_w / 2.0) + "\" y=\"" +
           num(kHeight - 10.0) +
           "\" font-size=\"14\" text-anchor=\"middle\">" + x_label +
           "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(kMarginT + plot_h / 2.0) +
           "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
           "16 " +
           num(kMarginT + plot_h / 2.0) + ")\">" + y_label + "</text>\n";

    for (const SvgSeries& s : series) {
        svg += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.values->size(); ++i) {
            if (i > 0) svg += ' ';
            svg += num(x_of(grid.value(i))) + "," + num(y_of((*s.values)[i]));
        }
        svg += "\"/>\n";
    }

    double ly = kMarginT + 16.0;
    for (const SvgSeries& s : series) {
        svg += "<line x1=\"" + num(kMarginL + plot_w - 150.0) + "\" y1=\"" +
               num(ly - 4.0) + "\" x2=\"" + num(kMarginL + plot_w - 120.0) +
               "\" y2=\"" + num(ly - 4.0) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(kMarginL + plot_w - 114.0) + "\" y=\"" +
               num(ly) + "\" font-size=\"12\">" + s.label + "</text>\n";
        ly += 16.0;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace vrs
