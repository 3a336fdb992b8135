#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vrs/detection.hpp"
#include "vrs/grid.hpp"
#include "vrs/params.hpp"

namespace vrs {

enum class RunMode { resonance, detuning_sweep, hwp_sweep, complementarity, fit };

std::string to_string(RunMode mode);

/// Flat INI-style run configuration. Physical defaults are the validated
/// parameter set of the modeled device; an empty [physics] section reproduces
/// it exactly.
struct RunConfig {
    // [physics] -- energies/rates in ueV, angles in degrees
    double omega_a = 0.0;
    double omega_c = 0.0;
    double g = 41.0;  // effective coupling |g|; g_tilde is calibrated from it
    double gamma = 0.28;
    double kappa = 66.0;
    double gamma_ph = 3.0;
    double p_a = 0.065;
    double p_c = 0.0;
    double theta_a = 42.6;
    double phi_qd = 80.8;
    double beta = -31.0;
    int n_max = 3;

    // [detection]
    double theta = 0.0;  // projection angle Theta (degrees)
    bool theta_from_alpha = false;
    double alpha = 5.5;  // HWP angle, used when theta_from_alpha
    double amp_ratio_ab = 2.85;
    double overlap_p = 1.0;
    double theta_c = 0.0;
    double instrument_fwhm = 13.5;

    // [grid] -- when start/stop are not set, the grid spans +-250 ueV around
    // the mean of (omega_a, omega_c)
    std::optional<double> grid_start;
    std::optional<double> grid_stop;
    std::size_t grid_points = 2001;

    // [run]
    RunMode mode = RunMode::resonance;
    std::vector<double> sweep;
    std::string out_dir = ".";
    bool svg = false;
    std::string input_path;

    QedParams qed_params() const;
    DetectionParams detection_params() const;
    FrequencyGrid frequency_grid() const;
    HilbertSpace hilbert_space() const { return HilbertSpace(n_max); }
    double theta_effective() const;

    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parse the documented key-value schema. Unknown keys, duplicate keys and
/// out-of-range values raise ValidationError; malformed lines raise ParseError
/// with position. A fully validated config is returned.
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace vrs
