// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// Usage: vrs_acceptance [path-to-vrs-sim-binary]
// (the binary path is needed only for the CLI determinism criterion)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "vrs/analysis.hpp"
#include "vrs/config.hpp"
#include "vrs/csv.hpp"
#include "vrs/detection.hpp"
#include "vrs/linalg.hpp"
#include "vrs/run.hpp"

using namespace vrs;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    int id = 0;
    std::string name;
    std::function<std::string()> body;  // returns detail text, throws on error
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

double uniform(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng()) / 4294967296.0);
}
double log_uniform(std::mt19937& rng, double lo, double hi) {
    return lo * std::exp(uniform(rng, 0.0, std::log(hi / lo)));
}

QedParams device_qed() {
    QedParams p;
    p.theta_a = 42.6;
    p.phi_qd = 80.8;
    p.beta = -31.0;
    p.gamma = 0.28;
    p.kappa = 66.0;
    p.gamma_ph = 3.0;
    p.p_a = 0.065;
    p.g_tilde = calibrate_g_tilde(41.0, p);
    return p;
}

DetectionParams device_det(double theta) {
    DetectionParams d;
    d.theta_proj = theta;
    d.amp_a = 1.0;
    d.amp_b = 1.0 / 2.85;
    d.overlap_p = 1.0;
    d.theta_c = 0.0;
    d.instrument_fwhm = 13.5;
    return d;
}

FrequencyGrid default_grid() { return FrequencyGrid(-250.0, 250.0, 2001); }

void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double doublet_separation(const FrequencyGrid& grid,
                          const std::vector<double>& values) {
    std::vector<Peak> peaks = find_peaks(RawSpectrum{grid, values});
    require(peaks.size() >= 2, "expected at least two peaks");
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return std::abs(peaks[0].energy - peaks[1].energy);
}

double rel_l2(const std::vector<cxd>& a, const std::vector<cxd>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double rel_l2_real(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// ----------------------------------------------------------------- criteria

std::string criterion_cui_raymer() {
    const auto t0 = Clock::now();
    const Splittings s = cui_raymer_splittings(41.0, 66.0, 0.28);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    require(std::abs(s.cavity - 67.4) <= 0.5,
            "cavity splitting " + fmt(s.cavity) + " outside 67.4 +- 0.5");
    require(std::abs(s.emitter - 76.4) <= 1.5,
            "emitter splitting " + fmt(s.emitter) + " outside 76.4 +- 1.5");
    require(ms < 1.0, "runtime " + fmt(ms) + " ms >= 1 ms");
    return "cavity=" + fmt(s.cavity) + " ueV, emitter=" + fmt(s.emitter) +
           " ueV, " + fmt(ms * 1000.0) + " us";
}

std::string criterion_splitting_consistency() {
    QedParams qed = device_qed();
    qed.gamma_ph = 0.0;
    qed.p_a = 0.01;
    const FrequencyGrid grid = default_grid();
    const HilbertSpace space(3);
    const ChannelSpectra ch0 =
        detected_spectrum(qed, device_det(0.0), space, grid);
    const ChannelSpectra ch90 =
        detected_spectrum(qed, device_det(90.0), space, grid);
    const double sep0 = doublet_separation(grid, ch0.total);
    const double sep90 = doublet_separation(grid, ch90.total);
    const Splittings f = cui_raymer_splittings(41.0, qed.kappa, qed.gamma);
    require(std::abs(sep0 - f.cavity) <= 3.0,
            "Theta=0 separation " + fmt(sep0) + " vs cavity formula " +
                fmt(f.cavity));
    require(std::abs(sep90 - f.emitter) <= 3.0,
            "Theta=90 separation " + fmt(sep90) + " vs emitter formula " +
                fmt(f.emitter));
    return "Theta=0: " + fmt(sep0) + " vs " + fmt(f.cavity) +
           "; Theta=90: " + fmt(sep90) + " vs " + fmt(f.emitter) + " (ueV)";
}

std::string criterion_oracle_equivalence() {
    std::mt19937 rng(0x5eed);
    const FrequencyGrid grid = default_grid();
    const HilbertSpace space(3);
    double worst = 0.0;
    for (int set = 0; set < 10; ++set) {
        QedParams p;
        p.theta_a = uniform(rng, 0.0, 90.0);
        p.phi_qd = uniform(rng, 0.0, 180.0);
        p.beta = uniform(rng, -90.0, 90.0);
        p.g_tilde = uniform(rng, 2.0, 30.0);
        p.omega_a = uniform(rng, -30.0, 30.0);
        p.omega_c = uniform(rng, -30.0, 30.0);
        p.gamma = log_uniform(rng, 0.1, 100.0);
        p.kappa = log_uniform(rng, 0.1, 100.0);
        p.gamma_ph = log_uniform(rng, 0.1, 100.0);
        p.p_a = log_uniform(rng, 0.1, 100.0);
        p.p_c = log_uniform(rng, 0.1, 100.0);
        p.phi_sign = (rng() & 1u) ? 1 : -1;

        const Liouvillian liou = build_liouvillian(p, space);
        const DensityMatrix rho = solve_steady(liou);
        const CorrelatorSet res = system_correlators(liou, rho, grid);
        const CorrelatorSet td = system_correlators_time_domain(liou, rho, grid);
        worst = std::max({worst, rel_l2(td.cav_cav, res.cav_cav),
                          rel_l2(td.emit_emit, res.emit_emit),
                          rel_l2(td.emit_cav, res.emit_cav),
                          rel_l2(td.cav_emit, res.cav_emit)});
    }
    require(worst <= 1e-6,
            "worst relative L2 " + fmt(worst) + " exceeds 1e-6");
    return "10 parameter sets, worst relative L2 = " + fmt(worst);
}

std::string criterion_steady_invariants() {
    std::mt19937 rng(0xfeed);
    const HilbertSpace space(3);
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
    for (int set = 0; set < 50; ++set) {
        QedParams p;
        p.theta_a = uniform(rng, 0.0, 90.0);
        p.phi_qd = uniform(rng, 0.0, 180.0);
        p.beta = uniform(rng, -90.0, 90.0);
        p.g_tilde = uniform(rng, 0.0, 60.0);
        p.omega_a = uniform(rng, -40.0, 40.0);
        p.omega_c = uniform(rng, -40.0, 40.0);
        p.gamma = log_uniform(rng, 0.1, 80.0);
        p.kappa = log_uniform(rng, 0.1, 80.0);
        p.gamma_ph = log_uniform(rng, 0.1, 80.0);
        p.p_a = log_uniform(rng, 0.01, 3.0);
        p.p_c = log_uniform(rng, 0.01, 3.0);
        p.phi_sign = (rng() & 1u) ? 1 : -1;
        const DensityMatrix rho = solve_steady(build_liouvillian(p, space));
        worst_trace =
            std::max(worst_trace, std::abs(rho.matrix.trace() - cxd(1.0)));
        worst_herm = std::max(worst_herm, rho.matrix.hermiticity_defect());
        const std::vector<double> ev =
            eigvals_hermitian(0.5 * (rho.matrix + rho.matrix.dagger()));
        worst_eig = std::min(worst_eig, ev.front());
    }
    require(worst_trace < 1e-10, "trace defect " + fmt(worst_trace));
    require(worst_herm < 1e-10, "hermiticity defect " + fmt(worst_herm));
    require(worst_eig > -1e-8, "negative eigenvalue " + fmt(worst_eig));

    // Decoupled two-level sector: population equals p_a / (p_a + gamma).
    QedParams p;
    p.gamma = 0.9;
    p.p_a = 0.25;
    p.kappa = 8.0;
    const HilbertSpace small(1);
    const DensityMatrix rho = solve_steady(build_liouvillian(p, small));
    const SystemOperators ops = build_operators(small);
    const double pop =
        (ops.sigma.dagger() * ops.sigma * rho.matrix).trace().real();
    const double closed = p.p_a / (p.p_a + p.gamma);
    require(std::abs(pop - closed) < 1e-8,
            "two-level population " + fmt(pop) + " vs " + fmt(closed));
    return "50 sets: |tr-1|<" + fmt(worst_trace) + ", herm<" + fmt(worst_herm) +
           ", min eig>" + fmt(worst_eig) + "; pump/decay population ok";
}

std::string criterion_truncation() {
    const QedParams qed = device_qed();
    const DetectionParams det = device_det(45.0);
    const FrequencyGrid grid = default_grid();
    const ChannelSpectra n3 = detected_spectrum(qed, det, HilbertSpace(3), grid);
    const ChannelSpectra n4 = detected_spectrum(qed, det, HilbertSpace(4), grid);
    const double diff = rel_l2_real(n3.total, n4.total);
    require(diff < 1e-6, "relative L2 change " + fmt(diff) + " >= 1e-6");
    return "n_max 3 -> 4 relative L2 change = " + fmt(diff);
}

std::string criterion_parity() {
    const QedParams qed = device_qed();
    const FrequencyGrid grid = default_grid();
    const HilbertSpace space(3);
    double worst = 0.0;
    for (const int sign : {+1, -1}) {
        const SignSolution sol = solve_sign(qed, space, grid, sign);
        for (const double theta : {10.0, 45.0, 84.0, 96.0}) {
            const ChannelSpectra a =
                compose_channels(sol, qed, device_det(theta), grid);
            const ChannelSpectra b =
                compose_channels(sol, qed, device_det(180.0 - theta), grid);
            for (std::size_t i = 0; i < grid.n_points; ++i) {
                worst = std::max(worst, std::abs(a.s_c[i] - b.s_c[i]));
                worst = std::max(worst, std::abs(a.s_i1[i] - b.s_i1[i]));
                worst = std::max(worst, std::abs(a.s_i2[i] + b.s_i2[i]));
            }
        }
    }
    require(worst < 1e-10, "worst parity defect " + fmt(worst));
    return "worst elementwise parity defect = " + fmt(worst);
}

std::string criterion_asymmetry_flip() {
    const QedParams qed = device_qed();
    const FrequencyGrid grid = default_grid();
    const HilbertSpace space(3);
    const SignSolution plus = solve_sign(qed, space, grid, +1);
    const SignSolution minus = solve_sign(qed, space, grid, -1);

    auto asymmetry_at = [&](double theta) {
        const DetectionParams det = device_det(theta);
        const ChannelSpectra ch =
            average_and_convolve(compose_channels(plus, qed, det, grid),
                                 compose_channels(minus, qed, det, grid),
                                 det.instrument_fwhm);
        const DoubletFit fit =
            fit_doublet(RawSpectrum{grid, ch.total_conv}, det.instrument_fwhm);
        require(fit.peak_energies.size() == 2, "expected a doublet fit");
        return (fit.areas[1] - fit.areas[0]) / (fit.areas[1] + fit.areas[0]);
    };
    const double a84 = asymmetry_at(84.0);
    const double a96 = asymmetry_at(96.0);
    require(a84 * a96 < 0.0, "asymmetries " + fmt(a84) + " and " + fmt(a96) +
                                 " do not flip sign");
    return "asymmetry(84 deg)=" + fmt(a84) + ", asymmetry(96 deg)=" + fmt(a96);
}

std::string criterion_intensity_contrast() {
    const QedParams qed = device_qed();
    const FrequencyGrid grid = default_grid();
    const HilbertSpace space(3);
    const ChannelSpectra bright =
        detected_spectrum(qed, device_det(0.0), space, grid);
    const ChannelSpectra dim =
        detected_spectrum(qed, device_det(90.0), space, grid);
    const double ratio =
        *std::max_element(bright.total_conv.begin(), bright.total_conv.end()) /
        *std::max_element(dim.total_conv.begin(), dim.total_conv.end());
    require(ratio > 20.0, "peak intensity ratio " + fmt(ratio) + " <= 20");
    return "peak intensity ratio Theta=0 / Theta=90 = " + fmt(ratio);
}

std::string criterion_complementarity() {
    QedParams emitter_driven = device_qed();
    QedParams cavity_driven = device_qed();
    cavity_driven.p_a = 0.0;
    cavity_driven.p_c = 0.065;
    const FrequencyGrid grid = default_grid();
    const HilbertSpace space(3);
    const DetectionParams det = device_det(90.0);

    auto metrics = [&](const QedParams& qed) {
        const ChannelSpectra ch = detected_spectrum(qed, det, space, grid);
        std::vector<Peak> peaks = find_peaks(RawSpectrum{grid, ch.total});
        require(peaks.size() >= 2, "expected a doublet");
        std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
            return a.height > b.height;
        });
        const double lo = std::min(peaks[0].energy, peaks[1].energy);
        const double hi = std::max(peaks[0].energy, peaks[1].energy);
        double dip = peaks[0].height;
        for (std::size_t i = 0; i < grid.n_points; ++i)
            if (grid.value(i) > lo && grid.value(i) < hi)
                dip = std::min(dip, ch.total[i]);
        return std::pair<double, double>(hi - lo, dip / peaks[0].height);
    };
    const auto [sep_e, dip_e] = metrics(emitter_driven);
    const auto [sep_c, dip_c] = metrics(cavity_driven);
    require(sep_c < sep_e, "cavity-driven separation " + fmt(sep_c) +
                               " not below emitter-driven " + fmt(sep_e));
    require(dip_c > dip_e, "cavity-driven dip " + fmt(dip_c) +
                               " not shallower than emitter-driven " +
                               fmt(dip_e));
    return "separation " + fmt(sep_c) + " < " + fmt(sep_e) + " ueV; dip " +
           fmt(dip_c) + " > " + fmt(dip_e);
}

std::string criterion_fit_round_trips() {
    // Doublet: centers +-32 ueV, FWHM 40 ueV, equal areas, 13.5 ueV blur.
    const FrequencyGrid grid = default_grid();
    std::vector<double> v(grid.n_points, 0.0);
    auto lorentz = [](double x, double c, double w) {
        const double u = 2.0 * (x - c) / w;
        return 2.0 / (std::numbers::pi * w) / (1.0 + u * u);
    };
    for (std::size_t i = 0; i < grid.n_points; ++i)
        v[i] = lorentz(grid.value(i), -32.0, 40.0) +
               lorentz(grid.value(i), 32.0, 40.0);
    const RawSpectrum blurred =
        convolve_instrument(RawSpectrum{grid, v}, 13.5);
    const DoubletFit fit = fit_doublet(blurred, 13.5);
    require(fit.peak_energies.size() == 2, "doublet fit collapsed");
    require(std::abs(fit.peak_energies[0] + 32.0) <= 0.5 &&
                std::abs(fit.peak_energies[1] - 32.0) <= 0.5,
            "centers " + fmt(fit.peak_energies[0]) + ", " +
                fmt(fit.peak_energies[1]));
    require(std::abs(fit.linewidths[0] - 40.0) <= 0.8 &&
                std::abs(fit.linewidths[1] - 40.0) <= 0.8,
            "widths " + fmt(fit.linewidths[0]) + ", " +
                fmt(fit.linewidths[1]));

    // Polarization curve at 1% noise.
    std::mt19937 rng(0xabcd);
    std::vector<std::pair<double, double>> samples;
    double peak = 0.0;
    auto model = [](double alpha, double theta, double phi) {
        const double x =
            std::cos(deg_to_rad(theta)) * std::cos(deg_to_rad(2 * alpha));
        const double y =
            std::sin(deg_to_rad(theta)) * std::sin(deg_to_rad(2 * alpha));
        return x * x + y * y + 2 * x * y * std::cos(deg_to_rad(phi));
    };
    for (double alpha = 0.0; alpha < 180.0; alpha += 5.0)
        peak = std::max(peak, model(alpha, 42.6, 80.8));
    for (double alpha = 0.0; alpha < 180.0; alpha += 5.0) {
        const double noise = 0.01 * peak * (2.0 * uniform(rng, 0.0, 1.0) - 1.0);
        samples.emplace_back(alpha, model(alpha, 42.6, 80.8) + noise);
    }
    const PolarizationFit pol = fit_polarization(samples);
    require(std::abs(pol.theta_a - 42.6) <= 1.0,
            "theta_a " + fmt(pol.theta_a));
    require(std::abs(pol.phi_qd - 80.8) <= 1.0, "phi_qd " + fmt(pol.phi_qd));
    return "doublet centers " + fmt(fit.peak_energies[0]) + "/" +
           fmt(fit.peak_energies[1]) + ", widths " + fmt(fit.linewidths[0]) +
           "/" + fmt(fit.linewidths[1]) + "; polarization " +
           fmt(pol.theta_a) + " deg / " + fmt(pol.phi_qd) + " deg";
}

std::string criterion_g2() {
    // Emitter channel: exactly zero.
    QedParams two_level;
    two_level.gamma = 0.5;
    two_level.p_a = 0.1;
    two_level.kappa = 20.0;
    const HilbertSpace small(1);
    const Liouvillian liou_small = build_liouvillian(two_level, small);
    const DensityMatrix rho_small = solve_steady(liou_small);
    const double g2_emitter =
        g2_zero(liou_small, rho_small, EmissionChannel::emitter);
    require(g2_emitter == 0.0, "emitter g2 " + fmt(g2_emitter) + " != 0");

    // Thermal cavity: 2 within 1e-6.
    QedParams thermal;
    thermal.kappa = 66.0;
    thermal.p_c = 0.066;
    thermal.gamma = 1.0;
    const HilbertSpace big(6);
    const Liouvillian liou_thermal = build_liouvillian(thermal, big);
    const DensityMatrix rho_thermal = solve_steady(liou_thermal);
    const double g2_thermal =
        g2_zero(liou_thermal, rho_thermal, EmissionChannel::cavity);
    require(std::abs(g2_thermal - 2.0) <= 1e-6,
            "thermal g2 " + fmt(g2_thermal));

    // Coupled system, cavity channel: antibunched.
    const QedParams qed = device_qed();
    const HilbertSpace space(3);
    const Liouvillian liou = build_liouvillian(qed, space);
    const DensityMatrix rho = solve_steady(liou);
    const double g2_cavity = g2_zero(liou, rho, EmissionChannel::cavity);
    require(g2_cavity < 1.0, "coupled-system g2 " + fmt(g2_cavity) + " >= 1");
    return "emitter g2=0 exactly, thermal g2=" + fmt(g2_thermal) +
           ", coupled cavity g2=" + fmt(g2_cavity);
}

std::string criterion_cli_determinism(const std::string& binary) {
    require(!binary.empty(), "vrs-sim binary path not provided");
    const fs::path base = fs::temp_directory_path() / "vrs_sim_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg_path = base / "run.ini";
    {
        std::ofstream cfg(cfg_path);
        cfg << "[physics]\nn_max = 2\n[detection]\ntheta = 45\n"
            << "[grid]\nstart = -200\nstop = 200\npoints = 801\n"
            << "[run]\nmode = resonance\n";
    }
    auto run_once = [&](const std::string& out) {
        const std::string cmd = binary + " " + cfg_path.string() + " --out " +
                                (base / out).string() + " > /dev/null 2>&1";
        require(std::system(cmd.c_str()) == 0, "CLI run failed");
    };
    run_once("a");
    run_once("b");
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(base / "a" / "spectrum.csv");
    const std::string b = slurp(base / "b" / "spectrum.csv");
    require(!a.empty(), "no CSV produced");
    require(a == b, "CSV outputs differ between identical runs");
    return "two runs, " + std::to_string(a.size()) + " bytes, byte-identical";
}

}  // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "";

    std::vector<Criterion> criteria;
    auto add = [&criteria](int id, const std::string& name,
                           std::function<std::string()> body) {
        Criterion c;
        c.id = id;
        c.name = name;
        c.body = std::move(body);
        criteria.push_back(std::move(c));
    };
    add(1, "Cui-Raymer closed forms", criterion_cui_raymer);
    add(2, "Spectral splitting consistency", criterion_splitting_consistency);
    add(3, "Oracle equivalence (resolvent vs time domain)",
        criterion_oracle_equivalence);
    add(4, "Steady-state invariants", criterion_steady_invariants);
    add(5, "Truncation convergence", criterion_truncation);
    add(6, "Channel parity suite", criterion_parity);
    add(7, "Asymmetry flip across Theta = 90", criterion_asymmetry_flip);
    add(8, "Intensity contrast between channels", criterion_intensity_contrast);
    add(9, "Emitter/cavity drive complementarity", criterion_complementarity);
    add(10, "Fitting round trips", criterion_fit_round_trips);
    add(11, "g2 checks", criterion_g2);
    add(12, "CLI determinism",
        [&binary] { return criterion_cli_determinism(binary); });

    // Stated runtime bounds (seconds); criteria without a bound get 0.
    const std::vector<double> budget = {0, 10.0, 120.0, 0, 0, 0,
                                        0, 0,    0,     0, 0, 0};

    int failures = 0;
    for (auto& c : criteria) {
        const auto t0 = Clock::now();
        try {
            c.details = c.body();
            c.pass = true;
        } catch (const std::exception& e) {
            c.details = e.what();
            c.pass = false;
        }
        c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (c.pass && budget[c.id - 1] > 0.0 && c.seconds >= budget[c.id - 1]) {
            c.pass = false;
            c.details += " [runtime " + fmt(c.seconds) + " s over budget " +
                         fmt(budget[c.id - 1]) + " s]";
        }
        if (!c.pass) ++failures;
        std::printf("[%2d] %s  %-45s %s (%.2f s)\n", c.id,
                    c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.details.c_str(), c.seconds);
        std::fflush(stdout);
    }
    std::printf("RESULT: %d/12 criteria passed\n",
                12 - failures);
    return failures == 0 ? 0 : 1;
}
