#pragma once

#include <vector>

#include "vrs/complex_matrix.hpp"

namespace vrs {

/// Partial-pivot LU factorization of a square matrix.
/// Pivots smaller than 1e-14 * max|entry of input| raise SingularMatrix.
class LuFactorization {
public:
    explicit LuFactorization(const ComplexMatrix& m);

    /// Solve m * x = rhs using the stored factors (forward/back substitution).
    std::vector<cxd> solve(const std::vector<cxd>& rhs) const;

    std::size_t dim() const { return lu_.rows(); }

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Solve m*x = rhs with one step of iterative refinement. Enforces the
/// relative residual contract ||m*x - rhs|| <= 1e-10 ||rhs|| (Euclidean),
/// raising NoConvergence otherwise.
std::vector<cxd> solve_linear(const ComplexMatrix& m,
                              const std::vector<cxd>& rhs);

/// Eigenvalues of a Hermitian matrix, ascending. Raises NotHermitian when
/// the Hermiticity defect exceeds 1e-12 * max(1, max|entry|).
std::vector<double> eigvals_hermitian(const ComplexMatrix& m);

/// Singular values, ascending, via one-sided Jacobi. Small singular values
/// are resolved to high relative accuracy, which makes this usable as a
/// rank / kernel-dimension probe.
std::vector<double> singular_values(const ComplexMatrix& m);

/// Matrix exponential exp(gen * t) evaluated as the classical fourth-order
/// one-step map T4(h*gen) = I + h*gen + ... + (h*gen)^4/24 applied 2^m times
/// via repeated squaring. The substep bound balances the O(h^4) truncation
/// against the 2^m * eps roundoff growth of repeated squaring; the default
/// sits near the optimum and yields ~1e-12 relative accuracy per unit of
/// ||gen|| * t.
ComplexMatrix propagator(const ComplexMatrix& gen, double t,
                         double max_substep_norm = 1.5e-3);

}  // namespace vrs
