#include "vrs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vrs/linalg.hpp"
#include "vrs/spectra.hpp"

namespace vrs {

namespace {

constexpr double kPi = std::numbers::pi;

double cost_of(const std::vector<double>& r) {
    double c = 0.0;
    for (double v : r) c += v * v;
    return 0.5 * c;
}

}  // namespace

Splittings cui_raymer_splittings(double g, double kappa, double gamma) {
    if (g < 0.0 || kappa < 0.0 || gamma < 0.0)
        throw InvalidInput("cui_raymer_splittings requires nonnegative inputs");
    const double g2 = g * g;
    const double rad_c = g2 - (kappa * kappa + gamma * gamma) / 8.0;
    if (rad_c < 0.0)
        throw BelowThreshold("cavity-channel radicand negative (weak coupling)");
    const double inner =
        std::sqrt(g2 * g2 + 2.0 * g2 * kappa * (kappa + gamma) / 4.0);
    const double rad_e = inner - kappa * kappa / 4.0;
    if (rad_e < 0.0)
        throw BelowThreshold("emitter-channel radicand negative (weak coupling)");
    return Splittings{2.0 * std::sqrt(rad_c), 2.0 * std::sqrt(rad_e)};
}

std::vector<Peak> find_peaks(const RawSpectrum& s, double prominence_frac) {
    const std::vector<double>& v = s.values;
    const std::size_t n = v.size();
    std::vector<Peak> peaks;
    if (n < 3) return peaks;

    double global_max = v[0];
    for (double x : v) global_max = std::max(global_max, x);
    const double threshold = prominence_frac * global_max;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;

        // Topographic prominence: lowest point on the walk toward the nearest
        // higher ground on each side (or the boundary).
        double min_left = v[i];
        for (std::size_t j = i; j-- > 0;) {
            min_left = std::min(min_left, v[j]);
            if (v[j] > v[i]) break;
        }
        double min_right = v[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            min_right = std::min(min_right, v[j]);
            if (v[j] > v[i]) break;
        }
        const double prominence = v[i] - std::max(min_left, min_right);
        if (prominence < threshold) continue;

        const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        double energy = s.grid.value(i);
        double height = v[i];
        if (denom < 0.0) {
            const double offset = 0.5 * (v[i - 1] - v[i + 1]) / denom;
            energy += offset * s.grid.spacing();
            height = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * offset;
        }
        peaks.push_back(Peak{energy, height});
    }
    return peaks;
}

std::vector<double> levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>&
        residual_fn,
    std::vector<double> params, const std::vector<double>& scales,
    double* final_cost, int max_iterations) {
    const std::size_t np = params.size();
    if (scales.size() != np) throw InvalidInput("scales size mismatch");

    std::vector<double> r = residual_fn(params);
    double cost = cost_of(r);
    double lambda = 1e-3;
    bool ever_improved = false;
    bool converged = false;

    for (int iter = 0; iter < max_iterations && !converged; ++iter) {
        const std::size_t nr = r.size();
        // Numeric Jacobian, central differences at 1e-6 of the parameter scale.
        std::vector<std::vector<double>> jac(np);
        for (std::size_t j = 0; j < np; ++j) {
            const double step = 1e-6 * std::max(std::abs(scales[j]), 1e-30);
            std::vector<double> pp = params, pm = params;
            pp[j] += step;
            pm[j] -= step;
            const std::vector<double> rp = residual_fn(pp);
            const std::vector<double> rm = residual_fn(pm);
            jac[j].resize(nr);
            for (std::size_t i = 0; i < nr; ++i)
                jac[j][i] = (rp[i] - rm[i]) / (2.0 * step);
        }

        ComplexMatrix jtj(np, np);
        std::vector<double> jtr(np, 0.0);
        for (std::size_t a = 0; a < np; ++a) {
            for (std::size_t b = a; b < np; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < nr; ++i) s += jac[a][i] * jac[b][i];
                jtj(a, b) = s;
                jtj(b, a) = s;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < nr; ++i) s += jac[a][i] * r[i];
            jtr[a] = s;
        }
        double grad_inf = 0.0;
        for (double g : jtr) grad_inf = std::max(grad_inf, std::abs(g));
        if (grad_inf < 1e-14 * (1.0 + cost)) {
            converged = true;
            break;
        }

        bool accepted = false;
        while (!accepted && lambda < 1e14) {
            ComplexMatrix m(jtj);
            for (std::size_t a = 0; a < np; ++a) {
                const double d = jtj(a, a).real();
                m(a, a) = d + lambda * std::max(d, 1e-30);
            }
            std::vector<cxd> rhs(np);
            for (std::size_t a = 0; a < np; ++a) rhs[a] = -jtr[a];

            std::vector<double> trial = params;
            bool solved = true;
            try {
                const std::vector<cxd> delta = solve_linear(m, rhs);
                for (std::size_t a = 0; a < np; ++a)
                    trial[a] += delta[a].real();
            } catch (const Error&) {
                solved = false;
            }

            if (solved) {
                const std::vector<double> rt = residual_fn(trial);
                const double ct = cost_of(rt);
                if (ct < cost) {
                    const double rel_drop = (cost - ct) / std::max(cost, 1e-300);
                    params = std::move(trial);
                    r = rt;
                    cost = ct;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    accepted = true;
                    ever_improved = true;
                    if (rel_drop < 1e-12) converged = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) break;  // damping exhausted at this point
    }

    if (!converged && !ever_improved && !(cost <= 0.0))
        throw FitDiverged("no residual decrease from the starting point");
    if (final_cost) *final_cost = cost;
    return params;
}

namespace {

// Lorentzian with unit area: (2/(pi w)) / (1 + 4 (x-c)^2 / w^2).
double lorentzian(double x, double center, double fwhm) {
    const double u = 2.0 * (x - center) / fwhm;
    return 2.0 / (kPi * fwhm) / (1.0 + u * u);
}

std::vector<double> doublet_model(const FrequencyGrid& grid,
                                  const std::vector<double>& p,
                                  double instrument_fwhm) {
    // p = (c1, w1, a1 [, c2, w2, a2]); widths enter through |w|.
    std::vector<double> model(grid.n_points, 0.0);
    for (std::size_t pk = 0; pk + 3 <= p.size(); pk += 3) {
        const double c = p[pk];
        const double w = std::max(std::abs(p[pk + 1]), 1e-6);
        const double a = p[pk + 2];
        for (std::size_t i = 0; i < grid.n_points; ++i)
            model[i] += a * lorentzian(grid.value(i), c, w);
    }
    if (instrument_fwhm > grid.spacing()) {
        model = convolve_instrument(RawSpectrum{grid, model}, instrument_fwhm)
                    .values;
    }
    return model;
}

struct PeakGuess {
    double center, width, area;
};

// Full width at half maximum measured by scanning away from a sample peak.
double measured_fwhm(const RawSpectrum& s, std::size_t peak_index) {
    const double half = 0.5 * s.values[peak_index];
    const double h = s.grid.spacing();
    double left = s.grid.value(0), right = s.grid.value(s.grid.n_points - 1);
    for (std::size_t j = peak_index; j-- > 0;) {
        if (s.values[j] < half) {
            left = s.grid.value(j);
            break;
        }
    }
    for (std::size_t j = peak_index + 1; j < s.grid.n_points; ++j) {
        if (s.values[j] < half) {
            right = s.grid.value(j);
            break;
        }
    }
    return std::max(right - left, h);
}

}  // namespace

DoubletFit fit_doublet(const RawSpectrum& s, double instrument_fwhm) {
    s.grid.validate();
    const std::vector<Peak> peaks = find_peaks(s);
    if (peaks.empty())
        throw InvalidInput("fit_doublet requires a spectrum with a peak");

    // Two tallest peaks as starting guesses (duplicate a split single peak).
    std::vector<Peak> by_height(peaks);
    std::sort(by_height.begin(), by_height.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });

    auto guess_for = [&](const Peak& pk) {
        std::size_t idx = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < s.grid.n_points; ++i) {
            const double d = std::abs(s.grid.value(i) - pk.energy);
            if (d < best) {
                best = d;
                idx = i;
            }
        }
        const double wm = measured_fwhm(s, idx);
        const double w0 = std::sqrt(std::max(
            wm * wm - instrument_fwhm * instrument_fwhm,
            4.0 * s.grid.spacing() * s.grid.spacing()));
        return PeakGuess{pk.energy, w0, pk.height * kPi * w0 / 2.0};
    };

    std::vector<PeakGuess> guesses;
    guesses.push_back(guess_for(by_height[0]));
    if (by_height.size() >= 2) {
        guesses.push_back(guess_for(by_height[1]));
    } else {
        PeakGuess g = guesses[0];
        guesses[0].center -= g.width / 2.0;
        g.center += g.width / 2.0;
        guesses.push_back(g);
    }

    auto residuals = [&](const std::vector<double>& p) {
        const std::vector<double> model = doublet_model(s.grid, p, instrument_fwhm);
        std::vector<double> r(s.grid.n_points);
        for (std::size_t i = 0; i < s.grid.n_points; ++i)
            r[i] = model[i] - s.values[i];
        return r;
    };

    const double span = s.grid.stop - s.grid.start;
    auto scales_for = [&](const std::vector<double>& p) {
        std::vector<double> sc(p.size());
        for (std::size_t k = 0; k < p.size(); k += 3) {
            sc[k] = span;
            sc[k + 1] = std::max(std::abs(p[k + 1]), s.grid.spacing());
            sc[k + 2] = std::max(std::abs(p[k + 2]), 1e-12);
        }
        return sc;
    };

    std::vector<double> p2 = {guesses[0].center, guesses[0].width,
                              guesses[0].area,  guesses[1].center,
                              guesses[1].width, guesses[1].area};
    double cost2 = 0.0;
    p2 = levenberg_marquardt(residuals, p2, scales_for(p2), &cost2);

    // Collapse rule: centers closer than half the larger linewidth cannot be
    // meaningfully resolved as a doublet; refit with a single line. (Half,
    // not one full width: separations above half a linewidth must round-trip.)
    const double w1 = std::abs(p2[1]), w2 = std::abs(p2[4]);
    const bool collapsed = std::abs(p2[0] - p2[3]) < 0.5 * std::max(w1, w2);

    std::vector<double> p;
    double cost = 0.0;
    if (collapsed) {
        std::vector<double> p1 = {guesses[0].center, guesses[0].width,
                                  guesses[0].area};
        p = levenberg_marquardt(residuals, p1, scales_for(p1), &cost);
    } else {
        p = p2;
        cost = cost2;
    }

    DoubletFit fit;
    for (std::size_t k = 0; k + 3 <= p.size(); k += 3) {
        fit.peak_energies.push_back(p[k]);
        fit.linewidths.push_back(std::abs(p[k + 1]));
        fit.areas.push_back(p[k + 2]);
    }
    if (fit.peak_energies.size() == 2 &&
        fit.peak_energies[0] > fit.peak_energies[1]) {
        std::swap(fit.peak_energies[0], fit.peak_energies[1]);
        std::swap(fit.linewidths[0], fit.linewidths[1]);
        std::swap(fit.areas[0], fit.areas[1]);
    }
    fit.residual_norm = std::sqrt(2.0 * cost);
    return fit;
}

PolarizationFit fit_polarization(
    const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 6)
        throw InvalidInput("fit_polarization needs at least 6 samples");
    double lo = samples[0].first, hi = samples[0].first;
    for (const auto& [alpha, counts] : samples) {
        lo = std::min(lo, alpha);
        hi = std::max(hi, alpha);
    }
    if (2.0 * (hi - lo) < 180.0)
        throw InvalidInput("samples must span at least 180 degrees of 2*alpha");

    double amp0 = 0.0;
    for (const auto& [alpha, counts] : samples) amp0 = std::max(amp0, counts);
    if (amp0 <= 0.0) amp0 = 1.0;

    auto residuals = [&](const std::vector<double>& p) {
        const double amp = p[0];
        const double ta = deg_to_rad(p[1]);
        const double phi = deg_to_rad(p[2]);
        std::vector<double> r(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double two_alpha = deg_to_rad(2.0 * samples[i].first);
            const double x = std::cos(ta) * std::cos(two_alpha);
            const double y = std::sin(ta) * std::sin(two_alpha);
            const double model =
                amp * (x * x + y * y + 2.0 * x * y * std::cos(phi));
            r[i] = model - samples[i].second;
        }
        return r;
    };

    const std::vector<double> starts = {15.0, 35.0, 55.0, 75.0};
    std::vector<double> best;
    double best_cost = 1e300;
    for (const double t0 : starts) {
        std::vector<double> p0 = {amp0, t0, 90.0};
        double cost = 0.0;
        try {
            const std::vector<double> p = levenberg_marquardt(
                residuals, p0, {amp0, 90.0, 180.0}, &cost);
            if (cost < best_cost) {
                best_cost = cost;
                best = p;
            }
        } catch (const FitDiverged&) {
            continue;  // this start failed; others may succeed
        }
    }
    if (best.empty()) throw FitDiverged("all polarization fit starts failed");

    // Fold the angles into their identifiable domains: theta_a in [0, 90],
    // phi in [0, 180] (the model depends on cos(phi) and is even in theta_a).
    double theta = std::fmod(std::abs(best[1]), 180.0);
    double phi = best[2];
    if (theta > 90.0) {
        // cos/sin swap under theta -> 180 - theta with a sign flip absorbed
        // into phi -> 180 - phi.
        theta = 180.0 - theta;
        phi = 180.0 - phi;
    }
    phi = std::fmod(std::abs(phi), 360.0);
    if (phi > 180.0) phi = 360.0 - phi;

    PolarizationFit fit;
    fit.theta_a = theta;
    fit.phi_qd = phi;
    fit.residual_norm = std::sqrt(2.0 * best_cost);
    fit.phi_identifiable = std::abs(std::sin(2.0 * deg_to_rad(theta))) > 1e-4;
    return fit;
}

double g2_zero(const Liouvillian& liouvillian, const DensityMatrix& rho_ss,
               EmissionChannel channel) {
    const SystemOperators ops = build_operators(liouvillian.space);
    const ComplexMatrix& x =
        channel == EmissionChannel::emitter ? ops.sigma : ops.a;
    const ComplexMatrix xdx = x.dagger() * x;
    const double population = (xdx * rho_ss.matrix).trace().real();
    if (population <= 1e-12)
        throw ZeroPopulation("channel population too small for g2(0)");
    const ComplexMatrix x2 = x * x;
    const double numerator =
        (x2.dagger() * x2 * rho_ss.matrix).trace().real();
    return numerator / (population * population);
}

}  // namespace vrs
