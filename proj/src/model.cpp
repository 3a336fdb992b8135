#include "vrs/model.hpp"

namespace vrs {

ComplexMatrix spre(const ComplexMatrix& a) {
    return kron(a, ComplexMatrix::identity(a.rows()));
}

ComplexMatrix spost(const ComplexMatrix& b) {
    return kron(ComplexMatrix::identity(b.rows()), b.transpose());
}

ComplexMatrix sandwich(const ComplexMatrix& a, const ComplexMatrix& b) {
    return kron(a, b.transpose());
}

ComplexMatrix dissipator(const ComplexMatrix& x) {
    const ComplexMatrix xdx = x.dagger() * x;
    ComplexMatrix d = sandwich(x, x.dagger());
    d *= cxd(2.0, 0.0);
    d -= spre(xdx);
    d -= spost(xdx);
    return d;
}

ComplexMatrix build_hamiltonian(const QedParams& params,
                                const HilbertSpace& space) {
    params.validate();
    const SystemOperators ops = build_operators(space);
    const cxd g = complex_g(params);

    ComplexMatrix h = params.omega_c * (ops.a.dagger() * ops.a) +
                      params.omega_a * (ops.sigma.dagger() * ops.sigma);
    const ComplexMatrix coupling = ops.a.dagger() * ops.sigma;
    h += cxd(0.0, 1.0) * g * coupling;
    h += cxd(0.0, -1.0) * std::conj(g) * coupling.dagger();
    return h;
}

Liouvillian build_liouvillian(const QedParams& params,
                              const HilbertSpace& space) {
    const SystemOperators ops = build_operators(space);
    const ComplexMatrix h = build_hamiltonian(params, space);

    ComplexMatrix gen = cxd(0.0, -1.0) * (spre(h) - spost(h));
    if (params.gamma > 0.0) gen += 0.5 * params.gamma * dissipator(ops.sigma);
    if (params.kappa > 0.0) gen += 0.5 * params.kappa * dissipator(ops.a);
    if (params.p_a > 0.0) gen += 0.5 * params.p_a * dissipator(ops.sigma.dagger());
    if (params.gamma_ph > 0.0) {
        // sigma^dag sigma is a projector, so the printed dephasing term
        // (2 N rho N - N rho - rho N) equals D[N] exactly.
        gen += params.gamma_ph * dissipator(ops.sigma.dagger() * ops.sigma);
    }
    if (params.p_c > 0.0) {
        gen += 0.5 * params.p_c * dissipator(ops.a);
        gen += 0.5 * params.p_c * dissipator(ops.a.dagger());
    }
    return Liouvillian{std::move(gen), space};
}

}  // namespace vrs
