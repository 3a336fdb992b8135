#pragma once

#include <optional>

#include "vrs/model.hpp"

namespace vrs {

/// Unit-trace steady-state density matrix.
struct DensityMatrix {
    ComplexMatrix matrix;
    HilbertSpace space;
};

/// Solve L rho = 0 with tr(rho) = 1 by replacing one generator row with the
/// trace functional and solving the bordered system.
///
/// Preconditions checked here: the generator kernel is one-dimensional
/// (second-smallest singular value above 1e-9 of the largest), raising
/// DegenerateSteadyState otherwise. The result satisfies ||L rho|| <=
/// 1e-10 ||L|| (Frobenius), |tr rho - 1| < 1e-10, Hermiticity defect < 1e-10
/// and min eigenvalue > -1e-8; violations raise NoConvergence. Negative
/// eigenvalues beyond that floor signal a too-small photon truncation and are
/// never clipped.
///
/// replace_row names the basis state whose diagonal row is replaced by the
/// trace functional (default: the diagonal row with the smallest max-abs
/// entry; only diagonal rows carry weight in the generator's left kernel).
/// The solution must not depend on the choice.
DensityMatrix solve_steady(const Liouvillian& liouvillian,
                           std::optional<std::size_t> replace_row = {});

}  // namespace vrs
