#pragma once

#include <functional>
#include <vector>

#include "vrs/grid.hpp"
#include "vrs/model.hpp"
#include "vrs/steady_state.hpp"

namespace vrs {

struct Splittings {
    double cavity = 0.0;   // ueV
    double emitter = 0.0;  // ueV
};

/// Closed-form vacuum Rabi doublet separations for the two detection channels:
///   cavity  = 2 sqrt(g^2 - (kappa^2 + gamma^2)/8)
///   emitter = 2 sqrt(sqrt(g^4 + 2 g^2 kappa (kappa + gamma)/4) - kappa^2/4)
/// Raises BelowThreshold when a radicand turns negative (weak coupling).
Splittings cui_raymer_splittings(double g, double kappa, double gamma);

struct Peak {
    double energy = 0.0;  // ueV, refined by local quadratic interpolation
    double height = 0.0;
};

/// Local maxima with topographic prominence above prominence_frac of the
/// global maximum, sorted by energy.
std::vector<Peak> find_peaks(const RawSpectrum& s, double prominence_frac = 0.02);

struct DoubletFit {
    std::vector<double> peak_energies;  // ascending, one or two entries
    std::vector<double> linewidths;     // Lorentzian FWHMs (ueV)
    std::vector<double> areas;
    double residual_norm = 0.0;
};

/// Least-squares fit of one or two Lorentzians convolved with a fixed-FWHM
/// Gaussian (the instrument response). Starts from two peaks; if the fitted
/// centers collapse within one linewidth the fit is redone with a single peak.
DoubletFit fit_doublet(const RawSpectrum& s, double instrument_fwhm);

struct PolarizationFit {
    double theta_a = 0.0;  // degrees
    double phi_qd = 0.0;   // degrees
    double residual_norm = 0.0;
    bool phi_identifiable = true;  // false for near-linear dipoles
};

/// Fit of |cos(theta_a) cos(2 alpha) + e^{i phi} sin(theta_a) sin(2 alpha)|^2
/// with a free amplitude to measured intensities vs. HWP angle alpha
/// (degrees). Multi-start over four initial theta_a values.
PolarizationFit fit_polarization(
    const std::vector<std::pair<double, double>>& alpha_deg_counts);

enum class EmissionChannel { emitter, cavity };

/// Zero-delay second-order correlation of the chosen channel in the steady
/// state: <X^dag X^dag X X> / <X^dag X>^2.
double g2_zero(const Liouvillian& liouvillian, const DensityMatrix& rho_ss,
               EmissionChannel channel);

/// Damped least squares with numeric central-difference Jacobians.
/// residual_fn maps parameters to the residual vector; scales set the
/// finite-difference step (1e-6 of each scale) and the damping metric.
std::vector<double> levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>&
        residual_fn,
    std::vector<double> initial, const std::vector<double>& scales,
    double* final_cost = nullptr, int max_iterations = 200);

}  // namespace vrs
