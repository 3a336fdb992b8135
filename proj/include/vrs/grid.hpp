#pragma once

#include <vector>

#include "vrs/errors.hpp"

namespace vrs {

/// Uniform frequency grid in ueV (relative frame).
struct FrequencyGrid {
    double start = -250.0;
    double stop = 250.0;
    std::size_t n_points = 2001;

    FrequencyGrid() = default;
    FrequencyGrid(double start_ueV, double stop_ueV, std::size_t points)
        : start(start_ueV), stop(stop_ueV), n_points(points) {
        validate();
    }

    void validate() const {
        if (n_points < 2) throw InvalidInput("grid needs at least 2 points");
        if (!(stop > start)) throw InvalidInput("grid stop must exceed start");
    }

    double spacing() const {
        return (stop - start) / static_cast<double>(n_points - 1);
    }
    double value(std::size_t i) const {
        return start + spacing() * static_cast<double>(i);
    }
    std::vector<double> values() const {
        std::vector<double> v(n_points);
        for (std::size_t i = 0; i < n_points; ++i) v[i] = value(i);
        return v;
    }

    friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
        return a.start == b.start && a.stop == b.stop &&
               a.n_points == b.n_points;
    }
};

/// Real-valued spectrum on a grid. Interference components may be negative.
struct RawSpectrum {
    FrequencyGrid grid;
    std::vector<double> values;
};

}  // namespace vrs
