#include "vrs/spectra.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>

#include "vrs/linalg.hpp"
#include "vrs/parallel.hpp"

namespace vrs {

namespace {

constexpr double kPi = std::numbers::pi;

// The generator conserves the ket-bra excitation difference: every term of
// the master equation shifts bra and ket excitation equally. Correlator seeds
// rho*a^dag and rho*sigma^dag therefore live in a single small sector and the
// resolvent/time evolution can run on that block alone. dominant_sector
// detects the sector numerically and falls back to the full space whenever a
// seed has measurable mass outside one sector.
struct SectorBasis {
    std::vector<std::size_t> index;  // Liouville indices of the sector

    ComplexMatrix restrict_matrix(const ComplexMatrix& full) const {
        const std::size_t n = index.size();
        ComplexMatrix b(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                b(r, c) = full(index[r], index[c]);
        return b;
    }

    std::vector<cxd> restrict_vector(const std::vector<cxd>& full) const {
        std::vector<cxd> v(index.size());
        for (std::size_t r = 0; r < index.size(); ++r) v[r] = full[index[r]];
        return v;
    }
};

SectorBasis full_basis(std::size_t n2) {
    SectorBasis b;
    b.index.resize(n2);
    for (std::size_t k = 0; k < n2; ++k) b.index[k] = k;
    return b;
}

SectorBasis dominant_sector(const HilbertSpace& space,
                            const std::vector<std::vector<cxd>>& seeds) {
    const std::size_t dim = space.dim();
    const std::size_t n2 = dim * dim;
    const int qmax = space.n_max + 1;

    std::vector<int> sector_of(n2);
    for (std::size_t k = 0; k < n2; ++k) {
        const std::size_t i = k / dim;
        const std::size_t j = k % dim;
        sector_of[k] = space.excitation(i) - space.excitation(j);
    }

    std::vector<double> mass(2 * qmax + 1, 0.0);
    double total = 0.0;
    for (const auto& s : seeds) {
        if (s.size() != n2) throw InvalidInput("seed dimension mismatch");
        for (std::size_t k = 0; k < n2; ++k) {
            const double m = std::norm(s[k]);
            mass[sector_of[k] + qmax] += m;
            total += m;
        }
    }
    if (total == 0.0) return full_basis(n2);
    const auto it = std::max_element(mass.begin(), mass.end());
    // Discarding the off-sector part must stay far below every tolerance in
    // this module: 1e-20 of the squared mass is 1e-10 in amplitude.
    const double off_mass = total - *it;
    if (off_mass > 1e-20 * total) return full_basis(n2);
    const int sector = static_cast<int>(it - mass.begin()) - qmax;

    SectorBasis b;
    for (std::size_t k = 0; k < n2; ++k)
        if (sector_of[k] == sector) b.index.push_back(k);
    return b;
}

// Observable weights in block coordinates: tr(op unvec(x)) = sum_k w[k] x[k].
std::vector<cxd> observable_weights(const ComplexMatrix& op, std::size_t dim,
                                    const SectorBasis& basis) {
    std::vector<cxd> w(basis.index.size());
    for (std::size_t r = 0; r < basis.index.size(); ++r) {
        const std::size_t k = basis.index[r];
        w[r] = op(k % dim, k / dim);
    }
    return w;
}

struct Job {
    std::size_t seed;  // index into the seed list
    std::vector<cxd> weights;
};

// ---------------------------------------------------------------- resolvent

std::vector<std::vector<cxd>> resolvent_spectra(
    const Liouvillian& liou, const std::vector<std::vector<cxd>>& seeds,
    const std::vector<std::pair<std::size_t, const ComplexMatrix*>>& requests,
    const FrequencyGrid& grid) {
    grid.validate();
    const std::size_t dim = liou.space.dim();
    const SectorBasis basis = dominant_sector(liou.space, seeds);
    const ComplexMatrix block = basis.restrict_matrix(liou.generator);

    std::vector<std::vector<cxd>> block_seeds;
    block_seeds.reserve(seeds.size());
    for (const auto& s : seeds) block_seeds.push_back(basis.restrict_vector(s));

    std::vector<Job> jobs;
    jobs.reserve(requests.size());
    for (const auto& [seed_idx, op] : requests)
        jobs.push_back({seed_idx, observable_weights(*op, dim, basis)});

    const std::size_t nb = basis.index.size();
    std::vector<std::vector<cxd>> out(jobs.size(),
                                      std::vector<cxd>(grid.n_points));

    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::string err_msg;

    parallel_for(grid.n_points, [&](std::size_t wi) {
        if (failed.load(std::memory_order_relaxed)) return;
        const double omega = grid.value(wi);
        ComplexMatrix m(block);
        for (std::size_t r = 0; r < nb; ++r) m(r, r) += cxd(0.0, omega);
        try {
            const LuFactorization lu(m);
            std::vector<std::vector<cxd>> sols;
            sols.reserve(block_seeds.size());
            for (const auto& s : block_seeds) sols.push_back(lu.solve(s));
            for (std::size_t j = 0; j < jobs.size(); ++j) {
                cxd acc = 0.0;
                const auto& x = sols[jobs[j].seed];
                const auto& w = jobs[j].weights;
                for (std::size_t r = 0; r < nb; ++r) acc += w[r] * x[r];
                out[j][wi] = -acc / kPi;
            }
        } catch (const SingularMatrix&) {
            failed.store(true, std::memory_order_relaxed);
            std::lock_guard<std::mutex> lock(err_mutex);
            err_msg = "resolvent singular at omega = " + std::to_string(omega);
        }
    });
    if (failed.load()) throw ResolventSingular(err_msg);
    return out;
}

// -------------------------------------------------------------- time domain

// Monomial coefficients of the Lagrange basis on nodes 0..5.
const std::array<std::array<double, 6>, 6>& lagrange_coefficients() {
    static const std::array<std::array<double, 6>, 6> coeffs = [] {
        ComplexMatrix p(6, 6);
        for (std::size_t k = 0; k < 6; ++k) {
            double pw = 1.0;
            for (std::size_t m = 0; m < 6; ++m) {
                p(k, m) = pw;
                pw *= static_cast<double>(k);
            }
        }
        const LuFactorization lu(p);
        std::array<std::array<double, 6>, 6> a{};
        for (std::size_t j = 0; j < 6; ++j) {
            std::vector<cxd> e(6, cxd(0.0, 0.0));
            e[j] = 1.0;
            const std::vector<cxd> col = lu.solve(e);
            for (std::size_t m = 0; m < 6; ++m) a[j][m] = col[m].real();
        }
        return a;
    }();
    return coeffs;
}

// Moments mu_m(u) = Int_0^5 s^m e^{i u s} ds, m = 0..5.
std::array<cxd, 6> filon_moments(double u) {
    std::array<cxd, 6> mu{};
    if (std::abs(u) < 0.5) {
        // Series branch; the downward recursion cancels catastrophically near
        // u = 0. mu_m = sum_k (iu)^k 5^{m+k+1} / (k! (m+k+1)).
        for (int m = 0; m < 6; ++m) {
            cxd sum(0.0, 0.0);
            cxd pow_iu(1.0, 0.0);
            double factorial = 1.0;
            for (int k = 0; k < 60; ++k) {
                if (k > 0) {
                    pow_iu *= cxd(0.0, u);
                    factorial *= k;
                }
                const cxd term = pow_iu * std::pow(5.0, m + k + 1) /
                                 (factorial * static_cast<double>(m + k + 1));
                sum += term;
                if (std::abs(term) < 1e-20 * (std::abs(sum) + 1e-300)) break;
            }
            mu[m] = sum;
        }
        return mu;
    }
    const cxd iu(0.0, u);
    const cxd e5(std::cos(5.0 * u), std::sin(5.0 * u));
    mu[0] = (e5 - 1.0) / iu;
    double p5 = 1.0;
    for (int m = 1; m < 6; ++m) {
        p5 *= 5.0;
        mu[m] = (p5 * e5 - static_cast<double>(m) * mu[m - 1]) / iu;
    }
    return mu;
}

// One-sided Fourier transform of sampled series by piecewise-quintic Filon
// quadrature. samples.size() must be a multiple of 5 plus 1.
void filon_transform(const std::vector<const std::vector<cxd>*>& series,
                     double step, const FrequencyGrid& grid,
                     std::size_t omega_stride,
                     std::vector<std::vector<cxd>>& out) {
    const std::size_t n_series = series.size();
    const std::size_t n_samples = series[0]->size();
    const std::size_t n_segments = (n_samples - 1) / 5;
    const auto& lagr = lagrange_coefficients();

    const std::size_t n_omega = (grid.n_points + omega_stride - 1) / omega_stride;
    parallel_for(n_omega, [&](std::size_t oi) {
        const std::size_t wi = oi * omega_stride;
        const double omega = grid.value(wi);
        const double u = omega * step;
        const std::array<cxd, 6> mu = filon_moments(u);
        std::array<cxd, 6> w{};
        for (std::size_t j = 0; j < 6; ++j) {
            cxd acc = 0.0;
            for (std::size_t m = 0; m < 6; ++m) acc += lagr[j][m] * mu[m];
            w[j] = acc * step;
        }
        const cxd phase_step(std::cos(5.0 * u), std::sin(5.0 * u));
        std::vector<cxd> acc(n_series, cxd(0.0, 0.0));
        cxd phase(1.0, 0.0);
        for (std::size_t seg = 0; seg < n_segments; ++seg) {
            if ((seg & 127u) == 0u)
                phase = std::polar(1.0, omega * step * 5.0 *
                                            static_cast<double>(seg));
            const std::size_t base = 5 * seg;
            for (std::size_t si = 0; si < n_series; ++si) {
                const std::vector<cxd>& c = *series[si];
                cxd local = 0.0;
                for (std::size_t j = 0; j < 6; ++j) local += w[j] * c[base + j];
                acc[si] += phase * local;
            }
            phase *= phase_step;
        }
        for (std::size_t si = 0; si < n_series; ++si) out[si][wi] = acc[si];
    });
}

double rel_l2_diff(const std::vector<cxd>& a, const std::vector<cxd>& b,
                   std::size_t stride) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); i += stride) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::vector<std::vector<cxd>> time_domain_spectra(
    const Liouvillian& liou, const std::vector<std::vector<cxd>>& seeds,
    const std::vector<std::pair<std::size_t, const ComplexMatrix*>>& requests,
    const FrequencyGrid& grid, const TimeDomainOptions& opt) {
    grid.validate();
    const std::size_t dim = liou.space.dim();
    const SectorBasis basis = dominant_sector(liou.space, seeds);
    const ComplexMatrix block = basis.restrict_matrix(liou.generator);
    const std::size_t nb = basis.index.size();

    std::vector<std::vector<cxd>> block_seeds;
    for (const auto& s : seeds) block_seeds.push_back(basis.restrict_vector(s));

    std::vector<Job> jobs;
    for (const auto& [seed_idx, op] : requests)
        jobs.push_back({seed_idx, observable_weights(*op, dim, basis)});

    const double gen_norm = block.inf_norm();
    if (!(gen_norm > 0.0))
        throw NoConvergence("time-domain path: generator norm is zero");

    std::vector<double> seed_norm0(block_seeds.size());
    for (std::size_t s = 0; s < block_seeds.size(); ++s) {
        double nrm = 0.0;
        for (const cxd& z : block_seeds[s]) nrm += std::norm(z);
        seed_norm0[s] = std::sqrt(nrm);
    }

    double step = opt.initial_step_scale / gen_norm;
    for (int level = 0; level <= opt.max_refinements; ++level) {
        const ComplexMatrix w_step = propagator(block, step);

        std::vector<std::vector<cxd>> state = block_seeds;
        std::vector<std::vector<cxd>> samples(jobs.size());
        auto record = [&] {
            for (std::size_t j = 0; j < jobs.size(); ++j) {
                cxd acc = 0.0;
                const auto& x = state[jobs[j].seed];
                const auto& w = jobs[j].weights;
                for (std::size_t r = 0; r < nb; ++r) acc += w[r] * x[r];
                samples[j].push_back(acc);
            }
        };
        record();

        bool horizon_reached = false;
        std::size_t n_steps = 0;
        std::vector<cxd> next(nb);
        while (n_steps < opt.max_samples) {
            for (auto& x : state) {
                for (std::size_t r = 0; r < nb; ++r) {
                    cxd acc = 0.0;
                    const cxd* row = &w_step.entries()[r * nb];
                    for (std::size_t c = 0; c < nb; ++c) acc += row[c] * x[c];
                    next[r] = acc;
                }
                x.swap(next);
            }
            ++n_steps;
            record();
            if ((n_steps % 512) == 0 || n_steps + 1 >= opt.max_samples) {
                double worst = 0.0;
                for (std::size_t s = 0; s < state.size(); ++s) {
                    double nrm = 0.0;
                    for (const cxd& z : state[s]) nrm += std::norm(z);
                    if (seed_norm0[s] > 0.0)
                        worst = std::max(worst, std::sqrt(nrm) / seed_norm0[s]);
                }
                if (worst <= opt.state_decay_tol &&
                    n_steps % 10 == 0) {  // multiple of 10 for both strides
                    horizon_reached = true;
                    break;
                }
            }
        }
        if (!horizon_reached)
            throw NoConvergence(
                "time-domain path: correlations did not decay within the "
                "sample budget");

        std::vector<const std::vector<cxd>*> series;
        for (const auto& s : samples) series.push_back(&s);

        // Quadrature error control: quintic Filon at the working step vs. at
        // twice the step on a thinned frequency set; disagreement forces a
        // refinement of the sampling step.
        std::vector<std::vector<cxd>> fine(jobs.size(),
                                           std::vector<cxd>(grid.n_points));
        filon_transform(series, step, grid, 1, fine);

        std::vector<std::vector<cxd>> coarse_samples(jobs.size());
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            coarse_samples[j].reserve(samples[j].size() / 2 + 1);
            for (std::size_t k = 0; k < samples[j].size(); k += 2)
                coarse_samples[j].push_back(samples[j][k]);
        }
        std::vector<const std::vector<cxd>*> coarse_series;
        for (const auto& s : coarse_samples) coarse_series.push_back(&s);
        const std::size_t check_stride = std::max<std::size_t>(
            1, grid.n_points / 256);
        std::vector<std::vector<cxd>> coarse(jobs.size(),
                                             std::vector<cxd>(grid.n_points));
        filon_transform(coarse_series, 2.0 * step, grid, check_stride, coarse);

        double worst = 0.0;
        for (std::size_t j = 0; j < jobs.size(); ++j)
            worst = std::max(worst,
                             rel_l2_diff(coarse[j], fine[j], check_stride));
        if (worst <= opt.quad_rel_tol) {
            for (auto& f : fine)
                for (cxd& v : f) v /= kPi;
            return fine;
        }
        step *= 0.5;
    }
    throw NoConvergence(
        "time-domain path: quadrature did not converge within the refinement "
        "budget");
}

std::vector<std::vector<cxd>> correlator_requests_run(
    const Liouvillian& liou, const DensityMatrix& rho, const FrequencyGrid& grid,
    bool time_domain, const TimeDomainOptions& opt) {
    const SystemOperators ops = build_operators(liou.space);
    const std::vector<std::vector<cxd>> seeds = {
        vec(rho.matrix * ops.a.dagger()), vec(rho.matrix * ops.sigma.dagger())};
    const std::vector<std::pair<std::size_t, const ComplexMatrix*>> requests = {
        {0, &ops.a},      // <a^dag(0) a(tau)>
        {1, &ops.sigma},  // <sigma^dag(0) sigma(tau)>
        {1, &ops.a},      // <sigma^dag(0) a(tau)>
        {0, &ops.sigma},  // <a^dag(0) sigma(tau)>
    };
    return time_domain ? time_domain_spectra(liou, seeds, requests, grid, opt)
                       : resolvent_spectra(liou, seeds, requests, grid);
}

}  // namespace

std::vector<cxd> correlation_spectrum(const Liouvillian& liouvillian,
                                      const DensityMatrix& rho_ss,
                                      const ComplexMatrix& op_left,
                                      const ComplexMatrix& op_right,
                                      const FrequencyGrid& grid) {
    const std::vector<std::vector<cxd>> seeds = {vec(rho_ss.matrix * op_left)};
    const std::vector<std::pair<std::size_t, const ComplexMatrix*>> requests = {
        {0, &op_right}};
    return resolvent_spectra(liouvillian, seeds, requests, grid)[0];
}

std::vector<cxd> correlation_spectrum_time_domain(
    const Liouvillian& liouvillian, const DensityMatrix& rho_ss,
    const ComplexMatrix& op_left, const ComplexMatrix& op_right,
    const FrequencyGrid& grid, const TimeDomainOptions& opt) {
    const std::vector<std::vector<cxd>> seeds = {vec(rho_ss.matrix * op_left)};
    const std::vector<std::pair<std::size_t, const ComplexMatrix*>> requests = {
        {0, &op_right}};
    return time_domain_spectra(liouvillian, seeds, requests, grid, opt)[0];
}

CorrelatorSet system_correlators(const Liouvillian& liouvillian,
                                 const DensityMatrix& rho_ss,
                                 const FrequencyGrid& grid) {
    auto f = correlator_requests_run(liouvillian, rho_ss, grid, false, {});
    return CorrelatorSet{std::move(f[0]), std::move(f[1]), std::move(f[2]),
                         std::move(f[3])};
}

CorrelatorSet system_correlators_time_domain(const Liouvillian& liouvillian,
                                             const DensityMatrix& rho_ss,
                                             const FrequencyGrid& grid,
                                             const TimeDomainOptions& opt) {
    auto f = correlator_requests_run(liouvillian, rho_ss, grid, true, opt);
    return CorrelatorSet{std::move(f[0]), std::move(f[1]), std::move(f[2]),
                         std::move(f[3])};
}

RawSpectrum convolve_instrument(const RawSpectrum& s, double fwhm_ueV) {
    s.grid.validate();
    if (s.values.size() != s.grid.n_points)
        throw InvalidInput("spectrum length does not match its grid");
    if (fwhm_ueV < 0.0) throw InvalidInput("fwhm must be nonnegative");
    const double h = s.grid.spacing();
    if (fwhm_ueV <= h) return s;  // below grid resolution: identity
    if (h > fwhm_ueV / 6.0)
        throw GridTooCoarse("grid spacing exceeds fwhm/6");

    const double sigma = fwhm_ueV / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const long radius = static_cast<long>(std::ceil(4.5 * sigma / h));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (long k = -radius; k <= radius; ++k) {
        const double x = static_cast<double>(k) * h;
        kernel[k + radius] = std::exp(-0.5 * x * x / (sigma * sigma));
        sum += kernel[k + radius];
    }
    for (double& w : kernel) w /= sum;  // discrete unit area

    RawSpectrum out{s.grid, std::vector<double>(s.values.size(), 0.0)};
    const long n = static_cast<long>(s.values.size());
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k) {
            const long j = i - k;
            if (j < 0 || j >= n) continue;
            acc += kernel[k + radius] * s.values[j];
        }
        out.values[i] = acc;
    }
    return out;
}

}  // namespace vrs
