#include <qbound/states.hpp>

#include <fmt/format.h>

#include <cmath>

namespace qbound {

namespace {

// Shared by bipartite and local validation. Returns the symmetrized matrix.
ComplexMatrix checked_density(const ComplexMatrix& m, double tol) {
    require_square(m, "density matrix");
    require_finite(m, "density matrix");
    const double herm = hermiticity_violation(m);
    if (herm > tol) {
        throw NonHermitianError(
            fmt::format("density matrix is not Hermitian: max |M - M^dagger| = {:.3e} > tol {:.1e}",
                        herm, tol),
            herm);
    }
    ComplexMatrix sym = (m + m.adjoint()) * 0.5;
    const double excess = sym.trace().real() - 1.0;
    if (std::abs(excess) > tol) {
        throw TraceError(fmt::format("density matrix trace is {:.12g} (excess {:.3e}, tol {:.1e})",
                                     1.0 + excess, excess, tol),
                         excess);
    }
    const double lmin = hermitian_eigenvalues(sym, tol)(0);
    if (lmin < -tol) {
        throw NotPSDError(
            fmt::format("density matrix is not PSD: min eigenvalue {:.3e} < -{:.1e}", lmin, tol), lmin);
    }
    return sym;
}

}  // namespace

BipartiteDensityMatrix BipartiteDensityMatrix::validate(const ComplexMatrix& matrix,
                                                        const BipartiteDims& dims, double tol) {
    require_square(matrix, "density matrix");
    if (matrix.rows() != dims.total()) {
        throw DimsError(fmt::format("density matrix side {} does not match dims {} (= {})",
                                    matrix.rows(), dims.to_string(), dims.total()));
    }
    return BipartiteDensityMatrix(checked_density(matrix, tol), dims);
}

BipartiteDensityMatrix BipartiteDensityMatrix::with_label(std::string label) const {
    BipartiteDensityMatrix copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

BipartiteDensityMatrix BipartiteDensityMatrix::with_provenance(SeedProvenance p) const {
    BipartiteDensityMatrix copy = *this;
    copy.provenance_ = p;
    return copy;
}

double BipartiteDensityMatrix::purity() const { return trace_of_product(matrix_, matrix_).real(); }

ComplexMatrix validate_local(const ComplexMatrix& m, double tol) { return checked_density(m, tol); }

ClassicalQuantumState ClassicalQuantumState::assemble(ComplexMatrix basis,
                                                      std::vector<double> probabilities,
                                                      std::vector<ComplexMatrix> conditional, int dB) {
    const int dA = static_cast<int>(basis.rows());
    if (basis.cols() != dA || static_cast<int>(probabilities.size()) != dA ||
        static_cast<int>(conditional.size()) != dA) {
        throw DimsError("classical-quantum state: basis, probabilities and conditional states disagree");
    }
    const BipartiteDims dims(dA, dB);
    ComplexMatrix total = ComplexMatrix::Zero(dims.total(), dims.total());
    for (int k = 0; k < dA; ++k) {
        if (probabilities[k] < 0.0) throw NotPSDError("negative classical probability", probabilities[k]);
        const ComplexMatrix proj = basis.col(k) * basis.col(k).adjoint();
        total += probabilities[k] * kron(proj, validate_local(conditional[k]));
    }
    auto rho = BipartiteDensityMatrix::validate(total, dims);
    return {std::move(basis), std::move(probabilities), std::move(conditional), std::move(rho)};
}

BipartiteDensityMatrix bell_phi_plus(int d) {
    const BipartiteDims dims(d, d);
    ComplexVector psi = ComplexVector::Zero(dims.total());
    for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0;
    psi /= std::sqrt(static_cast<double>(d));
    return BipartiteDensityMatrix::validate(psi * psi.adjoint(), dims).with_label(fmt::format("phi_plus({})", d));
}

BipartiteDensityMatrix isotropic(int d, double p) {
    const BipartiteDims dims(d, d);
    const int n = dims.total();
    const ComplexMatrix mixed = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
    const ComplexMatrix m = p * bell_phi_plus(d).matrix() + (1.0 - p) * mixed;
    return BipartiteDensityMatrix::validate(m, dims).with_label(fmt::format("isotropic({}, {})", d, p));
}

BipartiteDensityMatrix maximally_mixed(const BipartiteDims& dims) {
    const int n = dims.total();
    return BipartiteDensityMatrix::validate(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dims)
        .with_label("maximally_mixed");
}

BipartiteDensityMatrix random_pure(const BipartiteDims& dims, Rng& rng) {
    const ComplexVector psi = haar_vector(dims.total(), rng);
    return BipartiteDensityMatrix::validate(psi * psi.adjoint(), dims);
}

ComplexMatrix random_local_density(int d, int ancilla, Rng& rng) {
    if (ancilla < 1) throw DimsError(fmt::format("ancilla dimension must be >= 1, got {}", ancilla));
    if (ancilla == 1) {
        const ComplexVector psi = haar_vector(d, rng);
        return psi * psi.adjoint();
    }
    const ComplexMatrix g = ginibre(d, ancilla, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return (m + m.adjoint()) * 0.5;
}

BipartiteDensityMatrix random_mixed_induced(const BipartiteDims& dims, int ancilla, Rng& rng) {
    return BipartiteDensityMatrix::validate(random_local_density(dims.total(), ancilla, rng), dims);
}

ClassicalQuantumState random_cq(const BipartiteDims& dims, Rng& rng) {
    const int dA = dims.dA();
    ComplexMatrix basis = haar_unitary(dA, rng);
    std::vector<double> probs(dA);
    double total = 0.0;
    for (double& p : probs) {
        p = rng.exponential();
        total += p;
    }
    for (double& p : probs) p /= total;
    std::vector<ComplexMatrix> conditional;
    conditional.reserve(dA);
    for (int k = 0; k < dA; ++k) conditional.push_back(random_local_density(dims.dB(), dims.dB(), rng));
    return ClassicalQuantumState::assemble(std::move(basis), std::move(probs), std::move(conditional),
                                           dims.dB());
}

BipartiteDensityMatrix product(const ComplexMatrix& rhoA, const ComplexMatrix& rhoB) {
    const ComplexMatrix a = validate_local(rhoA);
    const ComplexMatrix b = validate_local(rhoB);
    return BipartiteDensityMatrix::validate(kron(a, b),
                                            BipartiteDims(static_cast<int>(a.rows()), static_cast<int>(b.rows())));
}

BipartiteDensityMatrix random_product(const BipartiteDims& dims, int ancilla, Rng& rng) {
    const ComplexMatrix a = random_local_density(dims.dA(), ancilla, rng);
    const ComplexMatrix b = random_local_density(dims.dB(), ancilla, rng);
    return product(a, b);
}

BipartiteDensityMatrix apply_local_unitary(const BipartiteDensityMatrix& rho, const ComplexMatrix& ua,
                                           const ComplexMatrix& ub) {
    if (ua.rows() != rho.dims().dA() || ub.rows() != rho.dims().dB()) {
        throw DimsError("local unitary dimensions do not match the state");
    }
    const ComplexMatrix u = kron(ua, ub);
    return BipartiteDensityMatrix::validate(u * rho.matrix() * u.adjoint(), rho.dims());
}

}  // namespace qbound
