#include "vrs/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include "vrs/linalg.hpp"

namespace vrs {

namespace {

// Only rows carrying weight in the trace functional (the left kernel of the
// generator) may be replaced, i.e. rows of diagonal elements (k, k); removing
// any other equation leaves the system rank-deficient. Among those, the
// smallest row protects conditioning.
std::size_t best_diagonal_row(const ComplexMatrix& m, std::size_t dim) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const std::size_t i = k * dim + k;
        double rn = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            rn = std::max(rn, std::abs(m(i, j)));
        if (best_norm < 0.0 || rn < best_norm) {
            best_norm = rn;
            best = i;
        }
    }
    return best;
}

}  // namespace

DensityMatrix solve_steady(const Liouvillian& liouvillian,
                           std::optional<std::size_t> replace_row) {
    const ComplexMatrix& gen = liouvillian.generator;
    const std::size_t dim = liouvillian.space.dim();
    const std::size_t n2 = gen.rows();

    const std::vector<double> sv = singular_values(gen);
    if (n2 >= 2 && !(sv[1] > 1e-9 * sv[n2 - 1]))
        throw DegenerateSteadyState(
            "generator kernel is not one-dimensional; steady state not unique");

    ComplexMatrix bordered(gen);
    std::size_t row = best_diagonal_row(gen, dim);
    if (replace_row) {
        if (*replace_row >= dim)
            throw InvalidInput("replace_row must name a basis state");
        row = *replace_row * dim + *replace_row;
    }
    for (std::size_t j = 0; j < n2; ++j) bordered(row, j) = 0.0;
    for (std::size_t i = 0; i < dim; ++i) bordered(row, i * dim + i) = 1.0;
    std::vector<cxd> rhs(n2, cxd(0.0, 0.0));
    rhs[row] = 1.0;

    std::vector<cxd> x;
    try {
        x = solve_linear(bordered, rhs);
    } catch (const SingularMatrix&) {
        throw DegenerateSteadyState("bordered steady-state system is singular");
    }

    // Residual contract against the original generator.
    double res = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
        cxd s = 0.0;
        for (std::size_t j = 0; j < n2; ++j) s += gen(i, j) * x[j];
        res += std::norm(s);
    }
    res = std::sqrt(res);
    if (res > 1e-10 * gen.frobenius_norm())
        throw NoConvergence("steady-state residual above contract");

    DensityMatrix rho{unvec(x, dim, dim), liouvillian.space};

    const cxd tr = rho.matrix.trace();
    if (std::abs(tr - cxd(1.0, 0.0)) > 1e-10)
        throw NoConvergence("steady-state trace deviates from 1");
    if (rho.matrix.hermiticity_defect() > 1e-10)
        throw NoConvergence("steady state is not Hermitian within tolerance");
    const std::vector<double> ev = eigvals_hermitian(
        0.5 * (rho.matrix + rho.matrix.dagger()));
    if (ev.front() < -1e-8)
        throw NoConvergence(
            "steady state has a negative eigenvalue beyond tolerance; "
            "increase the photon truncation");
    return rho;
}

}  // namespace vrs
