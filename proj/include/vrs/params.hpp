#pragma once

#include <cmath>
#include <numbers>

#include "vrs/complex_matrix.hpp"

namespace vrs {

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Physical parameters of the coupled emitter-cavity system.
///
/// Energies and rates are in ueV with hbar = 1, so time is in 1/ueV.
/// omega_a / omega_c are offsets from an arbitrary frame origin (the bare
/// emitter energy at zero detuning in the default setup); absolute optical
/// frequencies never enter the numerics.
struct QedParams {
    double omega_a = 0.0;   // emitter transition energy offset (ueV)
    double omega_c = 0.0;   // cavity mode energy offset (ueV)
    double g_tilde = 0.0;   // bare dipole-field coupling magnitude (ueV)
    double theta_a = 0.0;   // dipole ellipse mixing angle (degrees)
    double phi_qd = 0.0;    // dipole ellipticity phase (degrees)
    int phi_sign = +1;      // sign choice in exp(+-i phi_qd)
    double beta = 0.0;      // cavity local-field polarization angle (degrees)
    double gamma = 0.0;     // emitter free-space decay rate (ueV)
    double kappa = 0.0;     // cavity decay rate (ueV)
    double gamma_ph = 0.0;  // pure dephasing rate (ueV)
    double p_a = 0.0;       // incoherent emitter pump rate (ueV)
    double p_c = 0.0;       // incoherent cavity pump rate (ueV)

    void validate() const {
        if (gamma < 0 || kappa < 0 || gamma_ph < 0 || p_a < 0 || p_c < 0)
            throw InvalidInput("rates must be nonnegative");
        if (theta_a < 0.0 || theta_a > 90.0)
            throw InvalidInput("theta_a must lie in [0, 90] degrees");
        if (phi_qd < 0.0 || phi_qd > 180.0)
            throw InvalidInput("phi_qd must lie in [0, 180] degrees");
        if (phi_sign != 1 && phi_sign != -1)
            throw InvalidInput("phi_sign must be +1 or -1");
        if (g_tilde < 0.0) throw InvalidInput("g_tilde must be nonnegative");
    }

    QedParams with_sign(int sign) const {
        QedParams p = *this;
        p.phi_sign = sign;
        return p;
    }
};

/// Geometric projection of the elliptical dipole onto the cavity local field:
/// cos(beta) cos(theta_a) + sin(beta) sin(theta_a) e^{i s phi_qd}.
inline cxd coupling_projection(const QedParams& p) {
    const double ta = deg_to_rad(p.theta_a);
    const double b = deg_to_rad(p.beta);
    const double phi = deg_to_rad(p.phi_qd) * p.phi_sign;
    return std::cos(b) * std::cos(ta) +
           std::sin(b) * std::sin(ta) * std::exp(cxd(0.0, phi));
}

/// Complex coupling constant g entering the Hamiltonian (phase included).
inline cxd complex_g(const QedParams& p) {
    return p.g_tilde * coupling_projection(p);
}

/// |g|: half the vacuum Rabi splitting produced by the interaction term.
inline double effective_g(const QedParams& p) { return std::abs(complex_g(p)); }

/// g_tilde that yields the requested effective |g| at the stored angles.
inline double calibrate_g_tilde(double g_effective, const QedParams& angles) {
    const double proj = std::abs(coupling_projection(angles));
    if (proj < 1e-12)
        throw InvalidInput(
            "dipole is orthogonal to the cavity field; cannot calibrate");
    return g_effective / proj;
}

}  // namespace vrs
