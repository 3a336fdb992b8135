#include "vrs/detection.hpp"

#include <cmath>
#include <numbers>

namespace vrs {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> scaled_real(const std::vector<cxd>& f, double w) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = w * f[i].real();
    return out;
}

// Re[e^{-i chi} F_ac + e^{+i chi} F_ca], weighted.
std::vector<double> interference_channel(const std::vector<cxd>& f_ac,
                                         const std::vector<cxd>& f_ca,
                                         double weight, double chi) {
    const cxd em(std::cos(chi), -std::sin(chi));
    const cxd ep(std::cos(chi), std::sin(chi));
    std::vector<double> out(f_ac.size());
    for (std::size_t i = 0; i < f_ac.size(); ++i)
        out[i] = weight * (em * f_ac[i] + ep * f_ca[i]).real();
    return out;
}

std::vector<double> average(const std::vector<double>& a,
                            const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    return out;
}

std::vector<double> convolve_values(const std::vector<double>& v,
                                    const FrequencyGrid& grid, double fwhm) {
    return convolve_instrument(RawSpectrum{grid, v}, fwhm).values;
}

}  // namespace

double hwp_to_theta(double alpha_deg) {
    double theta = std::fmod(2.0 * (alpha_deg - 5.5), 180.0);
    if (theta < 0.0) theta += 180.0;
    return theta;
}

ChannelPrefactors channel_prefactors(const QedParams& qed,
                                     const DetectionParams& det, int phi_sign) {
    qed.validate();
    det.validate();
    if (phi_sign != 1 && phi_sign != -1)
        throw InvalidInput("phi_sign must be +1 or -1");

    const double theta = deg_to_rad(det.theta_proj);
    const double ta = deg_to_rad(qed.theta_a);
    const double phi = deg_to_rad(qed.phi_qd);
    const double theta_c = deg_to_rad(det.theta_c);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);

    ChannelPrefactors pf;
    pf.w_cavity = det.amp_b * qed.kappa * ct * ct;

    const cxd dipole_proj =
        std::cos(ta) * ct + std::exp(cxd(0.0, phi_sign * phi)) * std::sin(ta) * st;
    pf.w_emitter = det.amp_a * qed.gamma * std::norm(dipole_proj);

    const double cross =
        std::sqrt(det.amp_a * det.amp_b * qed.kappa * qed.gamma * det.overlap_p);
    pf.w_i1 = cross * std::cos(ta) * ct * ct;
    pf.chi_i1 = kPi / 2.0 + theta_c;
    pf.w_i2 = cross * std::sin(ta) * st * ct;
    pf.chi_i2 = kPi / 2.0 + theta_c + phi_sign * phi;
    return pf;
}

SignSolution solve_sign(const QedParams& qed, const HilbertSpace& space,
                        const FrequencyGrid& grid, int phi_sign) {
    Liouvillian liou = build_liouvillian(qed.with_sign(phi_sign), space);
    DensityMatrix rho = solve_steady(liou);
    CorrelatorSet corr = system_correlators(liou, rho, grid);
    return SignSolution{phi_sign, std::move(liou), std::move(rho),
                        std::move(corr)};
}

ChannelSpectra compose_channels(const SignSolution& sol, const QedParams& qed,
                                const DetectionParams& det,
                                const FrequencyGrid& grid) {
    const ChannelPrefactors pf = channel_prefactors(qed, det, sol.phi_sign);
    ChannelSpectra ch;
    ch.grid = grid;
    ch.s_c = scaled_real(sol.correlators.cav_cav, pf.w_cavity);
    ch.s_a = scaled_real(sol.correlators.emit_emit, pf.w_emitter);
    ch.s_i1 = interference_channel(sol.correlators.emit_cav,
                                   sol.correlators.cav_emit, pf.w_i1, pf.chi_i1);
    ch.s_i2 = interference_channel(sol.correlators.emit_cav,
                                   sol.correlators.cav_emit, pf.w_i2, pf.chi_i2);
    ch.total.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        ch.total[i] = ch.s_c[i] + ch.s_a[i] + ch.s_i1[i] + ch.s_i2[i];
    return ch;
}

ChannelSpectra average_and_convolve(const ChannelSpectra& plus,
                                    const ChannelSpectra& minus,
                                    double instrument_fwhm) {
    ChannelSpectra out;
    out.grid = plus.grid;
    out.s_c = average(plus.s_c, minus.s_c);
    out.s_a = average(plus.s_a, minus.s_a);
    out.s_i1 = average(plus.s_i1, minus.s_i1);
    out.s_i2 = average(plus.s_i2, minus.s_i2);
    out.total.resize(out.grid.n_points);
    for (std::size_t i = 0; i < out.grid.n_points; ++i)
        out.total[i] = out.s_c[i] + out.s_a[i] + out.s_i1[i] + out.s_i2[i];

    out.s_c_conv = convolve_values(out.s_c, out.grid, instrument_fwhm);
    out.s_a_conv = convolve_values(out.s_a, out.grid, instrument_fwhm);
    out.s_i1_conv = convolve_values(out.s_i1, out.grid, instrument_fwhm);
    out.s_i2_conv = convolve_values(out.s_i2, out.grid, instrument_fwhm);
    out.total_conv = convolve_values(out.total, out.grid, instrument_fwhm);
    return out;
}

ChannelSpectra detected_spectrum(const QedParams& qed,
                                 const DetectionParams& det,
                                 const HilbertSpace& space,
                                 const FrequencyGrid& grid) {
    const SignSolution plus = solve_sign(qed, space, grid, +1);
    const SignSolution minus = solve_sign(qed, space, grid, -1);
    return average_and_convolve(compose_channels(plus, qed, det, grid),
                                compose_channels(minus, qed, det, grid),
                                det.instrument_fwhm);
}

std::vector<ChannelSpectra> detuning_sweep(const QedParams& qed_template,
                                           const DetectionParams& det,
                                           const HilbertSpace& space,
                                           const std::vector<double>& detunings,
                                           const FrequencyGrid& grid) {
    std::vector<ChannelSpectra> out;
    out.reserve(detunings.size());
    for (const double delta : detunings) {
        QedParams qed = qed_template;
        qed.omega_c = qed_template.omega_a + delta;
        out.push_back(detected_spectrum(qed, det, space, grid));
    }
    return out;
}

}  // namespace vrs
