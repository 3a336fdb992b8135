#pragma once

#include "vrs/spectra.hpp"

namespace vrs {

/// Detection-side parameters: polarizer projection and channel calibration.
struct DetectionParams {
    double theta_proj = 0.0;      // projection angle Theta (degrees)
    double amp_a = 1.0;           // emitter-channel intensity scale A
    double amp_b = 1.0 / 2.85;    // cavity-channel intensity scale B
    double overlap_p = 1.0;       // field-overlap factor p in [0, 1]
    double theta_c = 0.0;         // cavity-free-space coupling phase (degrees)
    double instrument_fwhm = 13.5;  // spectrometer Gaussian response (ueV)

    void validate() const {
        if (overlap_p < 0.0 || overlap_p > 1.0)
            throw InvalidInput("overlap_p must lie in [0, 1]");
        if (amp_a < 0.0 || amp_b < 0.0)
            throw InvalidInput("channel amplitudes must be nonnegative");
        if (instrument_fwhm < 0.0)
            throw InvalidInput("instrument_fwhm must be nonnegative");
    }
};

/// Half-wave-plate angle to field projection angle: Theta = 2 (alpha - 5.5
/// degrees), reduced to [0, 180).
double hwp_to_theta(double alpha_deg);

/// Geometric weights of the four detected channels for one phi sign.
/// The interference channels carry a signed magnitude and the phase chi that
/// multiplies the <sigma^dag(0) a(tau)> transform as e^{-i chi} (its partner
/// <a^dag(0) sigma(tau)> gets e^{+i chi}).
struct ChannelPrefactors {
    double w_cavity = 0.0;
    double w_emitter = 0.0;
    double w_i1 = 0.0;
    double chi_i1 = 0.0;  // radians
    double w_i2 = 0.0;
    double chi_i2 = 0.0;  // radians
};

ChannelPrefactors channel_prefactors(const QedParams& qed,
                                     const DetectionParams& det, int phi_sign);

/// The four detected-channel spectra and their total, plus instrument-blurred
/// copies. total == s_c + s_a + s_i1 + s_i2 elementwise by construction.
struct ChannelSpectra {
    FrequencyGrid grid;
    std::vector<double> s_c, s_a, s_i1, s_i2, total;
    std::vector<double> s_c_conv, s_a_conv, s_i1_conv, s_i2_conv, total_conv;
};

/// Everything that depends on the sign of phi_qd but not on the polarizer:
/// generator, steady state and the four correlator spectra. Computing this
/// once lets polarizer sweeps reuse the expensive part.
struct SignSolution {
    int phi_sign = +1;
    Liouvillian liouvillian;
    DensityMatrix rho_ss;
    CorrelatorSet correlators;
};

SignSolution solve_sign(const QedParams& qed, const HilbertSpace& space,
                        const FrequencyGrid& grid, int phi_sign);

/// Channel composition for one phi sign (no averaging, no convolution).
ChannelSpectra compose_channels(const SignSolution& sol, const QedParams& qed,
                                const DetectionParams& det,
                                const FrequencyGrid& grid);

/// Average the channels of the two phi signs and apply the instrument
/// convolution.
ChannelSpectra average_and_convolve(const ChannelSpectra& plus,
                                    const ChannelSpectra& minus,
                                    double instrument_fwhm);

/// Full pipeline: both phi signs, channel weights, sign averaging, instrument
/// convolution.
ChannelSpectra detected_spectrum(const QedParams& qed,
                                 const DetectionParams& det,
                                 const HilbertSpace& space,
                                 const FrequencyGrid& grid);

/// One ChannelSpectra per detuning value; omega_c is swept as
/// omega_a + detuning with omega_a held fixed.
std::vector<ChannelSpectra> detuning_sweep(const QedParams& qed_template,
                                           const DetectionParams& det,
                                           const HilbertSpace& space,
                                           const std::vector<double>& detunings,
                                           const FrequencyGrid& grid);

}  // namespace vrs
