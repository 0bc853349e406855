#pragma once

#include <qbound/matrix.hpp>
#include <qbound/random.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qbound {

inline constexpr double kStateTolerance = 1e-9;

/// Where a sampled state came from: the ensemble seed and the sample index.
struct SeedProvenance {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

/// Hermitian, unit-trace, positive semidefinite operator on H_A (x) H_B.
/// Only obtainable through validate() or the named constructors below.
class BipartiteDensityMatrix {
public:
    /// Checks shape, finiteness, Hermiticity, trace and positivity in that order.
    /// The stored matrix is the symmetrized (M + M^dagger)/2.
    static BipartiteDensityMatrix validate(const ComplexMatrix& matrix, const BipartiteDims& dims,
                                           double tol = kStateTolerance);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const BipartiteDims& dims() const noexcept { return dims_; }
    int side() const noexcept { return dims_.total(); }

    const std::optional<std::string>& label() const noexcept { return label_; }
    const std::optional<SeedProvenance>& provenance() const noexcept { return provenance_; }

    BipartiteDensityMatrix with_label(std::string label) const;
    BipartiteDensityMatrix with_provenance(SeedProvenance p) const;

    double purity() const;

private:
    BipartiteDensityMatrix(ComplexMatrix m, BipartiteDims dims) : matrix_(std::move(m)), dims_(dims) {}

    ComplexMatrix matrix_;
    BipartiteDims dims_;
    std::optional<std::string> label_;
    std::optional<SeedProvenance> provenance_;
};

/// sum_k p_k |k><k| (x) rho_k. Zero-discord family with respect to measurements on A.
struct ClassicalQuantumState {
    ComplexMatrix basis;                       // dA x dA unitary; column k is |k>
    std::vector<double> probabilities;         // p_k
    std::vector<ComplexMatrix> conditional;    // rho_k on B
    BipartiteDensityMatrix assembled;

    /// Rebuilds the state from its parts and validates it.
    static ClassicalQuantumState assemble(ComplexMatrix basis, std::vector<double> probabilities,
                                          std::vector<ComplexMatrix> conditional, int dB);
};

/// Checks a single-system density matrix (used for factors and conditional states).
ComplexMatrix validate_local(const ComplexMatrix& m, double tol = kStateTolerance);

/// Projector onto (1/sqrt d) sum_i |ii>.
BipartiteDensityMatrix bell_phi_plus(int d);

/// p * phi_plus + (1 - p) * I / d^2. PSD for p in [-1/(d^2-1), 1].
BipartiteDensityMatrix isotropic(int d, double p);

BipartiteDensityMatrix maximally_mixed(const BipartiteDims& dims);

/// Projector onto a Haar-random vector.
BipartiteDensityMatrix random_pure(const BipartiteDims& dims, Rng& rng);

/// G G^dagger / Tr(G G^dagger) with G a (dA dB) x ancilla Ginibre matrix.
BipartiteDensityMatrix random_mixed_induced(const BipartiteDims& dims, int ancilla, Rng& rng);

/// Induced-measure density matrix on a single system of dimension d.
ComplexMatrix random_local_density(int d, int ancilla, Rng& rng);

/// Haar basis on A, uniform-Dirichlet weights, induced conditional states on B.
ClassicalQuantumState random_cq(const BipartiteDims& dims, Rng& rng);

/// rhoA (x) rhoB. Both factors are validated first.
BipartiteDensityMatrix product(const ComplexMatrix& rhoA, const ComplexMatrix& rhoB);

/// Random product state with induced-measure factors; ancilla 1 gives pure factors.
BipartiteDensityMatrix random_product(const BipartiteDims& dims, int ancilla, Rng& rng);

/// (UA (x) UB) rho (UA (x) UB)^dagger.
BipartiteDensityMatrix apply_local_unitary(const BipartiteDensityMatrix& rho, const ComplexMatrix& ua,
                                           const ComplexMatrix& ub);

}  // namespace qbound
