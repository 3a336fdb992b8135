#pragma once

#include "vrs/grid.hpp"
#include "vrs/model.hpp"
#include "vrs/steady_state.hpp"

namespace vrs {

/// One-sided correlation spectrum
///   F(w) = (1/pi) Int_0^inf dtau e^{i w tau} <op_left(0) op_right(tau)>_ss,
/// evaluated in closed frequency-domain form per the quantum regression
/// theorem: F(w) = -(1/pi) tr(op_right unvec((i w I + L)^{-1} vec(rho op_left))).
/// Re F of the diagonal case (op_left = B^dag, op_right = B) is the physical
/// emission spectrum; with this normalization a pure Lorentzian line of unit
/// weight has unit area.
std::vector<cxd> correlation_spectrum(const Liouvillian& liouvillian,
                                      const DensityMatrix& rho_ss,
                                      const ComplexMatrix& op_left,
                                      const ComplexMatrix& op_right,
                                      const FrequencyGrid& grid);

struct TimeDomainOptions {
    double state_decay_tol = 1e-10;  // horizon: stop once ||X|| falls below this
    double quad_rel_tol = 1e-7;      // step-halving agreement target
    std::size_t max_samples = std::size_t{1} << 22;
    int max_refinements = 8;
    double initial_step_scale = 0.35;  // first step = scale / ||L||_inf
};

/// Independent cross-check path for the same quantity: fixed-step fourth-order
/// integration of the e^{L tau} action (the classical RK4 one-step map,
/// composed by repeated squaring), followed by a discrete one-sided Fourier
/// transform (piecewise-quintic Filon quadrature with an adaptive step).
/// Shipped alongside the resolvent path; the resolvent path is the production
/// path.
std::vector<cxd> correlation_spectrum_time_domain(
    const Liouvillian& liouvillian, const DensityMatrix& rho_ss,
    const ComplexMatrix& op_left, const ComplexMatrix& op_right,
    const FrequencyGrid& grid, const TimeDomainOptions& opt = {});

/// The four correlator spectra the detection channels are built from.
struct CorrelatorSet {
    std::vector<cxd> cav_cav;    // <a^dag(0) a(tau)>
    std::vector<cxd> emit_emit;  // <sigma^dag(0) sigma(tau)>
    std::vector<cxd> emit_cav;   // <sigma^dag(0) a(tau)>
    std::vector<cxd> cav_emit;   // <a^dag(0) sigma(tau)>
};

CorrelatorSet system_correlators(const Liouvillian& liouvillian,
                                 const DensityMatrix& rho_ss,
                                 const FrequencyGrid& grid);

CorrelatorSet system_correlators_time_domain(const Liouvillian& liouvillian,
                                             const DensityMatrix& rho_ss,
                                             const FrequencyGrid& grid,
                                             const TimeDomainOptions& opt = {});

/// Discrete convolution with a unit-area Gaussian of the given FWHM.
/// fwhm at or below the grid spacing degenerates to the identity; spacing
/// coarser than fwhm/6 raises GridTooCoarse.
RawSpectrum convolve_instrument(const RawSpectrum& s, double fwhm_ueV);

}  // namespace vrs
