#include "vrs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vrs {

LuFactorization::LuFactorization(const ComplexMatrix& m) : lu_(m) {
    if (m.rows() != m.cols()) throw InvalidInput("LU requires a square matrix");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double pivot_floor = 1e-14 * m.max_abs();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double a = std::abs(lu_(i, k));
            if (a > best) {
                best = a;
                piv = i;
            }
        }
        if (!(best > pivot_floor))
            throw SingularMatrix("no pivot above threshold at column " +
                                 std::to_string(k));
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
        }
        const cxd inv_pivot = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cxd f = lu_(i, k) * inv_pivot;
            lu_(i, k) = f;
            if (f == cxd(0.0, 0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

std::vector<cxd> LuFactorization::solve(const std::vector<cxd>& rhs) const {
    const std::size_t n = dim();
    if (rhs.size() != n) throw InvalidInput("rhs size mismatch");
    std::vector<cxd> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 1; i < n; ++i) {
        cxd s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        cxd s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

namespace {

double norm2(const std::vector<cxd>& v) {
    double s = 0.0;
    for (const cxd& z : v) s += std::norm(z);
    return std::sqrt(s);
}

std::vector<cxd> matvec(const ComplexMatrix& m, const std::vector<cxd>& v) {
    std::vector<cxd> out(m.rows(), cxd(0.0, 0.0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cxd s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

}  // namespace

std::vector<cxd> solve_linear(const ComplexMatrix& m,
                              const std::vector<cxd>& rhs) {
    LuFactorization lu(m);
    std::vector<cxd> x = lu.solve(rhs);

    // One refinement pass; at these dimensions it costs next to nothing and
    // tightens the residual on mildly ill-conditioned systems.
    std::vector<cxd> r = matvec(m, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    const std::vector<cxd> dx = lu.solve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];

    r = matvec(m, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    const double rhs_norm = norm2(rhs);
    if (norm2(r) > 1e-10 * (rhs_norm > 0.0 ? rhs_norm : 1.0))
        throw NoConvergence("linear solve residual above contract");
    return x;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw InvalidInput("eigvals_hermitian requires a square matrix");
    const double scale = std::max(1.0, m.max_abs());
    if (m.hermiticity_defect() > 1e-12 * scale)
        throw NotHermitian("matrix is not Hermitian within tolerance");

    const std::size_t n = m.rows();
    ComplexMatrix a(m);
    // Symmetrize exactly so Jacobi sees a Hermitian input bit-for-bit.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cxd(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cxd v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    // Cyclic Jacobi with complex rotations. Off-diagonal mass decreases
    // quadratically once sweeps settle; 50 sweeps is far beyond need at n<=256.
    const int max_sweeps = 50;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-15 * scale * static_cast<double>(n)) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double m_apq = std::abs(apq);
                if (m_apq <= 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Phase that makes the off-diagonal real, then a real Jacobi
                // rotation on the 2x2 block.
                const cxd phase = apq / m_apq;
                const double tau = (aqq - app) / (2.0 * m_apq);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cxd sp = s * phase;  // rotation entry with phase folded in

                for (std::size_t k = 0; k < n; ++k) {
                    const cxd akp = a(k, p);
                    const cxd akq = a(k, q);
                    a(k, p) = c * akp - std::conj(sp) * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cxd apk = a(p, k);
                    const cxd aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = std::conj(sp) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    // One-sided Jacobi: orthogonalize column pairs; singular values emerge as
    // final column norms with good relative accuracy even when tiny.
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    ComplexMatrix a(m);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0;
                cxd gamma = 0.0;
                for (std::size_t k = 0; k < rows; ++k) {
                    const cxd ap = a(k, p);
                    const cxd aq = a(k, q);
                    alpha += std::norm(ap);
                    beta += std::norm(aq);
                    gamma += std::conj(ap) * aq;
                }
                const double g = std::abs(gamma);
                if (g <= 1e-15 * std::sqrt(alpha * beta) || g == 0.0) continue;
                rotated = true;
                const cxd phase = gamma / g;
                const double tau = (beta - alpha) / (2.0 * g);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < rows; ++k) {
                    const cxd ap = a(k, p);
                    const cxd aq = a(k, q);
                    a(k, p) = c * ap - s * std::conj(phase) * aq;
                    a(k, q) = s * phase * ap + c * aq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < rows; ++k) s += std::norm(a(k, j));
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end());
    return sv;
}

ComplexMatrix propagator(const ComplexMatrix& gen, double t,
                         double max_substep_norm) {
    if (gen.rows() != gen.cols())
        throw InvalidInput("propagator requires a square generator");
    const std::size_t n = gen.rows();
    if (t == 0.0) return ComplexMatrix::identity(n);

    const double scaled = gen.inf_norm() * std::abs(t);
    int m = 0;
    while (scaled / std::pow(2.0, m) > max_substep_norm && m < 60) ++m;

    const double h = t / std::pow(2.0, m);
    ComplexMatrix hg(gen);
    hg *= cxd(h, 0.0);

    // T4(h*gen): the one-step map of classical RK4 for a linear autonomous
    // system.
    ComplexMatrix w = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 4; ++k) {
        term = term * hg;
        term *= cxd(1.0 / k, 0.0);
        w += term;
    }
    for (int k = 0; k < m; ++k) w = w * w;
    return w;
}

}  // namespace vrs
