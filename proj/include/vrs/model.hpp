#pragma once

#include "vrs/complex_matrix.hpp"
#include "vrs/hilbert.hpp"
#include "vrs/params.hpp"

namespace vrs {

/// Superoperator for rho -> A rho (row-major vectorization).
ComplexMatrix spre(const ComplexMatrix& a);
/// Superoperator for rho -> rho B.
ComplexMatrix spost(const ComplexMatrix& b);
/// Superoperator for rho -> A rho B.
ComplexMatrix sandwich(const ComplexMatrix& a, const ComplexMatrix& b);
/// D[X] rho = 2 X rho X^dag - X^dag X rho - rho X^dag X, as a superoperator.
ComplexMatrix dissipator(const ComplexMatrix& x);

/// Generator of the master equation, acting on row-major vectorized density
/// matrices: d(vec rho)/dt = generator * vec rho. Units: ueV.
struct Liouvillian {
    ComplexMatrix generator;
    HilbertSpace space;
};

/// H = omega_c a^dag a + omega_a sigma^dag sigma + (i g a^dag sigma + h.c.)
ComplexMatrix build_hamiltonian(const QedParams& params,
                                const HilbertSpace& space);

/// Full generator: -i[H, .] plus emitter decay (gamma/2), cavity decay
/// (kappa/2), incoherent emitter pump (p_a/2), pure dephasing (gamma_ph,
/// written without the extra 1/2 so the coherence decays at exactly gamma_ph),
/// and thermal cavity pumping (p_c/2 on both raising and lowering channels).
Liouvillian build_liouvillian(const QedParams& params,
                              const HilbertSpace& space);

}  // namespace vrs
