#pragma once

#include <qbound/states.hpp>

#include <string_view>

namespace qbound {

/// Rank-one projective measurement on subsystem A, stored as an orthonormal basis
/// (columns of a dA x dA unitary). Projector k is |u_k><u_k|.
class ProjectiveMeasurementA {
public:
    /// Throws NotSquareError for a non-square basis and DimsError unless it is unitary within 1e-10.
    explicit ProjectiveMeasurementA(ComplexMatrix basis);

    /// Qubit measurement along the Bloch direction e (normalized internally).
    static ProjectiveMeasurementA from_bloch(const Eigen::Vector3d& e);
    static ProjectiveMeasurementA computational(int dA);

    const ComplexMatrix& basis() const noexcept { return basis_; }
    int dim() const noexcept { return static_cast<int>(basis_.rows()); }
    ComplexMatrix projector(int k) const;

private:
    ComplexMatrix basis_;
};

enum class DiscordMethod { ClosedForm, Optimized, OracleGrid };
std::string_view to_string(DiscordMethod m);

struct DiscordEstimate {
    double value = 0.0;   // clamped at 0
    int norm = 2;         // 2: squared Hilbert-Schmidt distance, 1: trace distance (no 1/2)
    DiscordMethod method = DiscordMethod::ClosedForm;
    int restarts = 0;
    long iterations = 0;
    ComplexMatrix best_basis;   // measurement attaining `value`
    bool is_upper_bound_only = false;
};

/// sum_k (P_k (x) I) rho (P_k (x) I).
BipartiteDensityMatrix measure_A(const BipartiteDensityMatrix& rho, const ProjectiveMeasurementA& m);

/// ||a - b||_2^2.
double hs_distance_sq(const BipartiteDensityMatrix& a, const BipartiteDensityMatrix& b);
/// ||a - b||_1, without the conventional 1/2.
double trace_distance_raw(const BipartiteDensityMatrix& a, const BipartiteDensityMatrix& b);

/// ||rho - Pi(rho)||_2^2 for the measurement with the given basis, evaluated as
/// Tr rho^2 - sum_k ||<k|rho|k>||_F^2 in the rotated frame.
double measured_hs_residual(const BipartiteDensityMatrix& rho, const ComplexMatrix& basis);
/// ||rho - Pi(rho)||_1 for the measurement with the given basis.
double measured_trace_residual(const BipartiteDensityMatrix& rho, const ComplexMatrix& basis);

/// Real symmetric M_ij = Tr[(s_i (x) I) rho (s_j (x) I) rho] over the Pauli matrices on A.
Eigen::Matrix3d pauli_correlation_matrix(const BipartiteDensityMatrix& rho);

/// D2 = (Tr rho^2 - lambda_max(M)) / 2. Requires dA = 2 (UnsupportedDimsError otherwise).
DiscordEstimate geometric_discord_2norm_qubitA(const BipartiteDensityMatrix& rho);

struct OptimizerSettings {
    int restarts = 20;
    int max_iterations = 20000;
    double gradient_tol = 1e-10;
};

/// min over bases of ||rho - Pi(rho)||_2^2 by Riemannian gradient ascent of
/// sum_k ||<k|rho|k>||_F^2 on U(dA), started from Haar-random bases. Restart r uses
/// rng.split(r); the minimum is taken by (value, restart index).
DiscordEstimate geometric_discord_2norm_opt(const BipartiteDensityMatrix& rho, Rng& rng,
                                            const OptimizerSettings& settings = {});

/// Closed form when dA = 2, optimizer otherwise.
DiscordEstimate geometric_discord_2norm(const BipartiteDensityMatrix& rho, Rng& rng,
                                        const OptimizerSettings& settings = {});

/// Upper estimate of the trace-norm discord: min over measured states Pi(rho) of
/// ||rho - Pi(rho)||_1, searched with Nelder-Mead over basis rotations.
DiscordEstimate trace_discord_upper(const BipartiteDensityMatrix& rho, int restarts, Rng& rng);

/// exp(X) for anti-Hermitian X.
ComplexMatrix exp_anti_hermitian(const ComplexMatrix& x);

}  // namespace qbound
