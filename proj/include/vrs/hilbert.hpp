#pragma once

#include <cstddef>

#include "vrs/complex_matrix.hpp"

namespace vrs {

/// Truncated emitter (x) cavity product space.
///
/// Basis ordering is fixed and load-bearing for reproducibility: the emitter
/// index varies slowest (all |g,n> first, then all |e,n>), photon number
/// ascending within each block. Index of |s, n> is s*(n_max+1) + n.
struct HilbertSpace {
    int n_max = 3;  // maximum cavity photon number kept

    explicit HilbertSpace(int n_max_photons = 3) : n_max(n_max_photons) {
        if (n_max < 1) throw InvalidInput("HilbertSpace requires n_max >= 1");
    }

    std::size_t cavity_dim() const { return static_cast<std::size_t>(n_max) + 1; }
    std::size_t dim() const { return 2 * cavity_dim(); }

    std::size_t index(int emitter_excited, int n_photons) const {
        return static_cast<std::size_t>(emitter_excited) * cavity_dim() +
               static_cast<std::size_t>(n_photons);
    }

    int photon_number(std::size_t basis_index) const {
        return static_cast<int>(basis_index % cavity_dim());
    }
    int emitter_excited(std::size_t basis_index) const {
        return static_cast<int>(basis_index / cavity_dim());
    }
    /// Total excitation quantum number (photons + excited emitter).
    int excitation(std::size_t basis_index) const {
        return photon_number(basis_index) + emitter_excited(basis_index);
    }
};

struct SystemOperators {
    ComplexMatrix a;      // cavity annihilation, I_emitter (x) a_cav
    ComplexMatrix sigma;  // emitter lowering, |g><e| (x) I_cav
};

/// Cavity annihilation and emitter lowering operators on the product space.
inline SystemOperators build_operators(const HilbertSpace& space) {
    const std::size_t nc = space.cavity_dim();
    ComplexMatrix a_cav(nc, nc);
    for (std::size_t n = 1; n < nc; ++n)
        a_cav(n - 1, n) = std::sqrt(static_cast<double>(n));

    ComplexMatrix lower(2, 2);
    lower(0, 1) = 1.0;  // sigma |e> = |g>

    SystemOperators ops;
    ops.a = kron(ComplexMatrix::identity(2), a_cav);
    ops.sigma = kron(lower, ComplexMatrix::identity(nc));
    return ops;
}

}  // namespace vrs
