#include <cmath>
#include <limits>

#include "doctest.h"
#include "test_support.hpp"
#include "vrs/analysis.hpp"
#include "vrs/spectra.hpp"
#include "vrs/steady_state.hpp"

using namespace vrs;
using test::uniform;

namespace {

double lorentzian_area(double x, double c, double w, double area) {
    const double u = 2.0 * (x - c) / w;
    return area * 2.0 / (std::numbers::pi * w) / (1.0 + u * u);
}

RawSpectrum synth_doublet(const FrequencyGrid& grid, double c1, double w1,
                          double a1, double c2, double w2, double a2,
                          double blur_fwhm) {
    std::vector<double> v(grid.n_points, 0.0);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.value(i);
        v[i] = lorentzian_area(x, c1, w1, a1) + lorentzian_area(x, c2, w2, a2);
    }
    RawSpectrum s{grid, v};
    if (blur_fwhm > 0.0) s = convolve_instrument(s, blur_fwhm);
    return s;
}

double polarization_model(double alpha_deg, double theta_deg, double phi_deg) {
    const double ta = deg_to_rad(theta_deg);
    const double phi = deg_to_rad(phi_deg);
    const double x = std::cos(ta) * std::cos(deg_to_rad(2.0 * alpha_deg));
    const double y = std::sin(ta) * std::sin(deg_to_rad(2.0 * alpha_deg));
    return x * x + y * y + 2.0 * x * y * std::cos(phi);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("closed-form splittings at the device rates") {
    const Splittings s = cui_raymer_splittings(41.0, 66.0, 0.28);
    CHECK(s.cavity == doctest::Approx(67.4237).epsilon(1e-4));
    CHECK(s.emitter == doctest::Approx(76.4461).epsilon(1e-4));
}

TEST_CASE("lossless limit gives 2g on both channels") {
    const Splittings s = cui_raymer_splittings(17.0, 0.0, 0.0);
    CHECK(s.cavity == doctest::Approx(34.0).epsilon(1e-14));
    CHECK(s.emitter == doctest::Approx(34.0).epsilon(1e-14));
}

TEST_CASE("cavity splitting decreases with kappa") {
    double prev = cui_raymer_splittings(41.0, 1.0, 0.28).cavity;
    for (double kappa : {10.0, 30.0, 60.0, 90.0}) {
        const double cur = cui_raymer_splittings(41.0, kappa, 0.28).cavity;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("weak coupling raises BelowThreshold") {
    CHECK_THROWS_AS(cui_raymer_splittings(1.0, 66.0, 0.28), BelowThreshold);
}

TEST_CASE("single Lorentzian yields one peak at its center") {
    const FrequencyGrid grid(-100.0, 100.0, 801);
    const RawSpectrum s = synth_doublet(grid, 13.0, 20.0, 1.0, 13.0, 20.0, 0.0, 0.0);
    const std::vector<Peak> peaks = find_peaks(s);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].energy - 13.0) < grid.spacing() / 2.0);
}

TEST_CASE("synthetic 75 ueV doublet is resolved at the right separation") {
    const FrequencyGrid grid(-200.0, 200.0, 1601);
    const RawSpectrum s =
        synth_doublet(grid, -37.5, 30.0, 1.0, 37.5, 30.0, 1.0, 0.0);
    const std::vector<Peak> peaks = find_peaks(s);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[1].energy - peaks[0].energy - 75.0) <= grid.spacing());
}

TEST_CASE("flat spectra have no peaks") {
    const FrequencyGrid grid(-10.0, 10.0, 101);
    const RawSpectrum s{grid, std::vector<double>(grid.n_points, 0.7)};
    CHECK(find_peaks(s).empty());
}

TEST_CASE("doublet fit inverts a blurred synthetic doublet") {
    const FrequencyGrid grid(-250.0, 250.0, 2001);
    const RawSpectrum s =
        synth_doublet(grid, -32.0, 40.0, 1.0, 32.0, 40.0, 1.0, 13.5);
    const DoubletFit fit = fit_doublet(s, 13.5);
    REQUIRE(fit.peak_energies.size() == 2);
    CHECK(std::abs(fit.peak_energies[0] + 32.0) < 0.5);
    CHECK(std::abs(fit.peak_energies[1] - 32.0) < 0.5);
    CHECK(fit.linewidths[0] == doctest::Approx(40.0).epsilon(0.02));
    CHECK(fit.linewidths[1] == doctest::Approx(40.0).epsilon(0.02));
    CHECK(fit.areas[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fit.areas[1] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("a single line triggers the one-peak fallback") {
    const FrequencyGrid grid(-150.0, 150.0, 1201);
    const RawSpectrum s =
        synth_doublet(grid, 5.0, 25.0, 2.0, 5.0, 25.0, 0.0, 13.5);
    const DoubletFit fit = fit_doublet(s, 13.5);
    REQUIRE(fit.peak_energies.size() == 1);
    CHECK(std::abs(fit.peak_energies[0] - 5.0) < 0.5);
    CHECK(fit.linewidths[0] == doctest::Approx(25.0).epsilon(0.02));
}

TEST_CASE("doublet fits recover centers to 1% of the separation") {
    std::mt19937 rng(301);
    const FrequencyGrid grid(-250.0, 250.0, 2001);
    for (int trial = 0; trial < 5; ++trial) {
        const double w1 = uniform(rng, 15.0, 45.0);
        const double w2 = uniform(rng, 15.0, 45.0);
        const double sep =
            uniform(rng, std::max(w1, w2) / 2.0 + 10.0, 150.0);
        const double c = uniform(rng, -20.0, 20.0);
        const double a1 = uniform(rng, 0.5, 2.0);
        const double a2 = uniform(rng, 0.5, 2.0);
        const RawSpectrum s = synth_doublet(grid, c - sep / 2, w1, a1,
                                            c + sep / 2, w2, a2, 13.5);
        const DoubletFit fit = fit_doublet(s, 13.5);
        REQUIRE(fit.peak_energies.size() == 2);
        CHECK(std::abs(fit.peak_energies[0] - (c - sep / 2)) < 0.01 * sep);
        CHECK(std::abs(fit.peak_energies[1] - (c + sep / 2)) < 0.01 * sep);
    }
}

TEST_CASE("polarization fit recovers the dipole parameters at 1% noise") {
    std::mt19937 rng(311);
    std::vector<std::pair<double, double>> samples;
    double peak = 0.0;
    for (double alpha = 0.0; alpha < 180.0; alpha += 7.5)
        peak = std::max(peak, polarization_model(alpha, 42.6, 80.8));
    for (double alpha = 0.0; alpha < 180.0; alpha += 7.5) {
        const double clean = 1000.0 * polarization_model(alpha, 42.6, 80.8);
        const double noise =
            0.01 * 1000.0 * peak * (2.0 * uniform(rng, 0.0, 1.0) - 1.0);
        samples.emplace_back(alpha, clean + noise);
    }
    const PolarizationFit fit = fit_polarization(samples);
    CHECK(std::abs(fit.theta_a - 42.6) < 1.0);
    CHECK(std::abs(fit.phi_qd - 80.8) < 1.0);
    CHECK(fit.phi_identifiable);
}

TEST_CASE("polarization fit is invariant under a global intensity rescale") {
    std::vector<std::pair<double, double>> base;
    for (double alpha = 0.0; alpha < 182.0; alpha += 6.0)
        base.emplace_back(alpha, polarization_model(alpha, 37.0, 55.0));
    std::vector<std::pair<double, double>> scaled(base);
    for (auto& s : scaled) s.second *= 4175.0;
    const PolarizationFit f1 = fit_polarization(base);
    const PolarizationFit f2 = fit_polarization(scaled);
    CHECK(std::abs(f1.theta_a - f2.theta_a) < 1e-6);
    CHECK(std::abs(f1.phi_qd - f2.phi_qd) < 1e-6);
}

TEST_CASE("a linear dipole leaves the ellipticity phase unidentifiable") {
    std::vector<std::pair<double, double>> samples;
    for (double alpha = 0.0; alpha < 182.0; alpha += 6.0)
        samples.emplace_back(alpha, polarization_model(alpha, 0.0, 90.0));
    const PolarizationFit fit = fit_polarization(samples);
    CHECK(fit.theta_a < 1.0);
    CHECK_FALSE(fit.phi_identifiable);
}

TEST_CASE("a circular dipole produces a flat curve and a perfect fit") {
    std::vector<std::pair<double, double>> samples;
    for (double alpha = 0.0; alpha < 182.0; alpha += 6.0) {
        const double v = polarization_model(alpha, 45.0, 90.0);
        CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
        samples.emplace_back(alpha, v);
    }
    const PolarizationFit fit = fit_polarization(samples);
    CHECK(fit.residual_norm < 1e-8);
    for (double alpha = 0.0; alpha < 182.0; alpha += 6.0)
        CHECK(polarization_model(alpha, fit.theta_a, fit.phi_qd) ==
              doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("insufficient polarization data is rejected") {
    std::vector<std::pair<double, double>> samples = {
        {0.0, 1.0}, {10.0, 0.9}, {20.0, 0.7}, {30.0, 0.5}, {40.0, 0.4}};
    CHECK_THROWS_AS(fit_polarization(samples), InvalidInput);
    samples = {{0.0, 1.0},  {10.0, 0.9}, {20.0, 0.7},
               {30.0, 0.5}, {40.0, 0.4}, {50.0, 0.45}};
    CHECK_THROWS_AS(fit_polarization(samples), InvalidInput);  // span too small
}

TEST_CASE("two-level emitter has exactly zero g2") {
    QedParams p;
    p.gamma = 0.5;
    p.p_a = 0.1;
    p.kappa = 20.0;
    const HilbertSpace space(1);
    const Liouvillian liou = build_liouvillian(p, space);
    const DensityMatrix rho = solve_steady(liou);
    CHECK(g2_zero(liou, rho, EmissionChannel::emitter) == 0.0);
}

TEST_CASE("thermal cavity g2 equals the truncated-geometric moment oracle") {
    QedParams p;
    p.kappa = 66.0;
    p.p_c = 0.066;
    p.gamma = 1.0;
    const HilbertSpace space(6);
    const Liouvillian liou = build_liouvillian(p, space);
    const DensityMatrix rho = solve_steady(liou);
    const double g2 = g2_zero(liou, rho, EmissionChannel::cavity);

    const double q = p.p_c / (p.kappa + p.p_c);
    double z = 0.0, n1 = 0.0, n2 = 0.0;
    for (int n = 0; n <= space.n_max; ++n) {
        const double w = std::pow(q, n);
        z += w;
        n1 += n * w;
        n2 += n * (n - 1.0) * w;
    }
    const double oracle = (n2 / z) / ((n1 / z) * (n1 / z));
    CHECK(g2 == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(g2 - 2.0) <= 1e-6);
}

TEST_CASE("no population means no g2") {
    QedParams p;
    p.gamma = 0.5;
    p.kappa = 20.0;
    p.p_a = 0.1;
    const HilbertSpace space(1);
    const Liouvillian liou = build_liouvillian(p, space);
    const DensityMatrix rho = solve_steady(liou);
    // Cavity stays dark without coupling or cavity pumping.
    CHECK_THROWS_AS(g2_zero(liou, rho, EmissionChannel::cavity),
                    ZeroPopulation);
}

TEST_CASE("coupled-system cavity emission is antibunched at device parameters") {
    QedParams p;
    p.theta_a = 42.6;
    p.phi_qd = 80.8;
    p.beta = -31.0;
    p.gamma = 0.28;
    p.kappa = 66.0;
    p.gamma_ph = 3.0;
    p.p_a = 0.065;
    p.g_tilde = calibrate_g_tilde(41.0, p);
    const HilbertSpace space(3);
    const Liouvillian liou = build_liouvillian(p, space);
    const DensityMatrix rho = solve_steady(liou);
    const double g2 = g2_zero(liou, rho, EmissionChannel::cavity);
    CHECK(g2 > 0.0);
    CHECK(g2 < 1.0);
}

TEST_CASE("hopeless residuals raise FitDiverged") {
    auto residuals = [](const std::vector<double>&) {
        return std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
    };
    CHECK_THROWS_AS(levenberg_marquardt(residuals, {1.0}, {1.0}), FitDiverged);
}

}  // TEST_SUITE
