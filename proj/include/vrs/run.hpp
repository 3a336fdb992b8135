#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vrs/config.hpp"

namespace vrs {

/// Execute the configured experiment and write its output files into
/// config.out_dir (created if missing). Returns the list of files written.
/// Identical configs produce byte-identical files. Throws vrs errors on
/// failure; the CLI maps them to exit codes.
std::vector<std::string> run(const RunConfig& config, std::ostream& diagnostics);

}  // namespace vrs
