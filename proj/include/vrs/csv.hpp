#pragma once

#include <string>
#include <vector>

namespace vrs {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// One CSV line from pre-formatted cells (no quoting; cells must not contain
/// commas or newlines).
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace vrs
