#pragma once

#include <qbound/states.hpp>

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbound {

/// Classification threshold for negative partial-transpose eigenvalues: 1e-9 * side.
double default_negativity_tol(const BipartiteDims& dims);

/// Span of the eigenvectors of rho^{T_A} with eigenvalue below -tol.
struct NegativeSubspace {
    ComplexMatrix projector;            // P_minus
    int count = 0;                      // m
    RealVector negative_eigenvalues;    // ascending, all < -tol
    ComplexMatrix eigenvectors;         // columns span P_minus
};

/// Throws PPTError (carrying lambda_min) when no eigenvalue is below -tol.
/// tol < 0 selects default_negativity_tol.
NegativeSubspace pt_negative_subspace(const BipartiteDensityMatrix& rho, double tol = -1.0);

/// Sum of |lambda| over the negative eigenvalues of rho^{T_A}. Unnormalized.
double negativity(const BipartiteDensityMatrix& rho);

enum class WitnessKind { Negativity, RandomRobustness, Custom };

std::string_view to_string(WitnessKind kind);
WitnessKind parse_witness_kind(std::string_view text);

/// Hermitian W with Tr(W rho) < 0 on the state it was built for.
struct EntanglementWitness {
    EntanglementWitness(ComplexMatrix m, BipartiteDims d) : matrix(std::move(m)), dims(d) {}

    ComplexMatrix matrix;
    BipartiteDims dims;
    WitnessKind kind = WitnessKind::Custom;
    bool sup_normalized = false;
    double e_w = 0.0;       // -Tr(W rho) on the source state
    double hs_sq = 0.0;     // Tr(W^2)
    double sup_norm = 0.0;  // ||W||_inf
    std::optional<int> neg_count;  // m, negativity kind only

    /// Fields for the witness export document.
    nlohmann::json export_fields() const;
};

/// Wraps an arbitrary Hermitian operator. Throws DegenerateWitnessError unless it
/// detects rho (Tr(W rho) < 0).
EntanglementWitness custom_witness(const ComplexMatrix& w, const BipartiteDensityMatrix& rho);

/// W = (P_minus)^{T_A}. Tr(W rho) = -N and Tr(W^2) = m.
EntanglementWitness negativity_witness(const BipartiteDensityMatrix& rho, double tol = -1.0);

/// PPT relaxation of the random robustness: with D = dA dB and v the eigenvector of
/// lambda_min(rho^{T_A}), W = D (|v><v|)^{T_A}, Tr W = D, e_w = -D lambda_min, which is the
/// smallest s making (rho + s I/D)^{T_A} positive.
EntanglementWitness random_robustness_witness(const BipartiteDensityMatrix& rho, double tol = -1.0);

/// max(0, -Re Tr(W rho)); throws DimsError on shape mismatch and NonHermitianError if
/// the imaginary residue exceeds 1e-10.
double witnessed_entanglement(const BipartiteDensityMatrix& rho, const EntanglementWitness& w);

/// Real part of Tr(W sigma), without clamping.
double witness_expectation(const ComplexMatrix& w, const ComplexMatrix& sigma);

/// W / ||W||_inf with e_w rescaled. Throws DegenerateWitnessError for a zero witness.
EntanglementWitness sup_normalize(const EntanglementWitness& w);

EntanglementWitness build_witness(const BipartiteDensityMatrix& rho, WitnessKind kind, double tol = -1.0);

}  // namespace qbound
