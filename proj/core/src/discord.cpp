#include <qbound/discord.hpp>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>

namespace qbound {

ProjectiveMeasurementA::ProjectiveMeasurementA(ComplexMatrix basis) : basis_(std::move(basis)) {
    require_square(basis_, "measurement basis");
    const auto n = basis_.rows();
    const double defect = (basis_.adjoint() * basis_ - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw DimsError(fmt::format("measurement basis is not orthonormal (defect {:.3e})", defect));
    }
}

ProjectiveMeasurementA ProjectiveMeasurementA::from_bloch(const Eigen::Vector3d& e) {
    const double len = e.norm();
    if (!(len > 0.0)) throw DimsError("Bloch direction must be nonzero");
    const Eigen::Vector3d n = e / len;
    ComplexMatrix sigma(2, 2);
    sigma << Complex(n.z(), 0), Complex(n.x(), -n.y()), Complex(n.x(), n.y()), Complex(-n.z(), 0);
    // Eigenvalues of n.sigma are -1, +1; order the +1 outcome first.
    const auto eig = hermitian_eigensystem(sigma);
    ComplexMatrix basis(2, 2);
    basis.col(0) = eig.vectors.col(1);
    basis.col(1) = eig.vectors.col(0);
    return ProjectiveMeasurementA(basis);
}

ProjectiveMeasurementA ProjectiveMeasurementA::computational(int dA) {
    return ProjectiveMeasurementA(ComplexMatrix::Identity(dA, dA));
}

ComplexMatrix ProjectiveMeasurementA::projector(int k) const {
    return basis_.col(k) * basis_.col(k).adjoint();
}

std::string_view to_string(DiscordMethod m) {
    switch (m) {
        case DiscordMethod::ClosedForm: return "closed_form";
        case DiscordMethod::Optimized: return "optimized";
        case DiscordMethod::OracleGrid: return "oracle_grid";
    }
    return "closed_form";
}

namespace {

void require_measurement_dims(const BipartiteDensityMatrix& rho, const ComplexMatrix& basis) {
    if (basis.rows() != rho.dims().dA() || basis.cols() != rho.dims().dA()) {
        throw DimsError(fmt::format("measurement acts on dimension {} but subsystem A has dimension {}",
                                    basis.rows(), rho.dims().dA()));
    }
}

// (U^dagger (x) I) rho (U (x) I)
ComplexMatrix rotate_to_basis(const ComplexMatrix& rho, const ComplexMatrix& basis, int dB) {
    const ComplexMatrix u = kron(basis, ComplexMatrix::Identity(dB, dB));
    return u.adjoint() * rho * u;
}

double diagonal_block_weight(const ComplexMatrix& rotated, int dA, int dB) {
    double sum = 0.0;
    for (int k = 0; k < dA; ++k) sum += rotated.block(k * dB, k * dB, dB, dB).squaredNorm();
    return sum;
}

ComplexMatrix off_diagonal_blocks(ComplexMatrix rotated, int dA, int dB) {
    for (int k = 0; k < dA; ++k) rotated.block(k * dB, k * dB, dB, dB).setZero();
    return rotated;
}

}  // namespace

BipartiteDensityMatrix measure_A(const BipartiteDensityMatrix& rho, const ProjectiveMeasurementA& m) {
    require_measurement_dims(rho, m.basis());
    const int dA = rho.dims().dA();
    const int dB = rho.dims().dB();
    ComplexMatrix rotated = rotate_to_basis(rho.matrix(), m.basis(), dB);
    for (int i = 0; i < dA; ++i)
        for (int j = 0; j < dA; ++j)
            if (i != j) rotated.block(i * dB, j * dB, dB, dB).setZero();
    const ComplexMatrix u = kron(m.basis(), ComplexMatrix::Identity(dB, dB));
    return BipartiteDensityMatrix::validate(u * rotated * u.adjoint(), rho.dims());
}

double hs_distance_sq(const BipartiteDensityMatrix& a, const BipartiteDensityMatrix& b) {
    if (!(a.dims() == b.dims())) throw DimsError("hs_distance_sq: dimension mismatch");
    return (a.matrix() - b.matrix()).squaredNorm();
}

double trace_distance_raw(const BipartiteDensityMatrix& a, const BipartiteDensityMatrix& b) {
    if (!(a.dims() == b.dims())) throw DimsError("trace_distance_raw: dimension mismatch");
    return schatten_norm(a.matrix() - b.matrix(), SchattenOrder(1.0));
}

double measured_hs_residual(const BipartiteDensityMatrix& rho, const ComplexMatrix& basis) {
    require_measurement_dims(rho, basis);
    const int dA = rho.dims().dA();
    const int dB = rho.dims().dB();
    const ComplexMatrix rotated = rotate_to_basis(rho.matrix(), basis, dB);
    return std::max(0.0, rho.purity() - diagonal_block_weight(rotated, dA, dB));
}

double measured_trace_residual(const BipartiteDensityMatrix& rho, const ComplexMatrix& basis) {
    require_measurement_dims(rho, basis);
    const int dA = rho.dims().dA();
    const int dB = rho.dims().dB();
    const ComplexMatrix rotated = rotate_to_basis(rho.matrix(), basis, dB);
    return schatten_norm(off_diagonal_blocks(rotated, dA, dB), SchattenOrder(1.0));
}

Eigen::Matrix3d pauli_correlation_matrix(const BipartiteDensityMatrix& rho) {
    if (rho.dims().dA() != 2) throw UnsupportedDimsError("Pauli correlation matrix needs dA = 2");
    const int dB = rho.dims().dB();
    ComplexMatrix paulis[3] = {ComplexMatrix(2, 2), ComplexMatrix(2, 2), ComplexMatrix(2, 2)};
    paulis[0] << 0, 1, 1, 0;
    paulis[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    paulis[2] << 1, 0, 0, -1;
    const ComplexMatrix id = ComplexMatrix::Identity(dB, dB);
    ComplexMatrix sr[3];
    for (int i = 0; i < 3; ++i) sr[i] = kron(paulis[i], id) * rho.matrix();
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = trace_of_product(sr[i], sr[j]).real();
    return m;
}

DiscordEstimate geometric_discord_2norm_qubitA(const BipartiteDensityMatrix& rho) {
    if (rho.dims().dA() != 2) {
        throw UnsupportedDimsError(
            fmt::format("closed-form geometric discord needs a qubit on A, got dims {}", rho.dims().to_string()));
    }
    const Eigen::Matrix3d m = pauli_correlation_matrix(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
    const Eigen::Vector3d top = solver.eigenvectors().col(2);
    DiscordEstimate out;
    out.value = std::max(0.0, 0.5 * (rho.purity() - solver.eigenvalues()(2)));
    out.method = DiscordMethod::ClosedForm;
    out.best_basis = ProjectiveMeasurementA::from_bloch(top).basis();
    return out;
}

ComplexMatrix exp_anti_hermitian(const ComplexMatrix& x) {
    // x = -i h with h = i x Hermitian, so exp(x) = V exp(-i lambda) V^dagger.
    const ComplexMatrix h = Complex(0.0, 1.0) * x;
    const auto eig = hermitian_eigensystem(h);
    ComplexVector phases(eig.values.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -eig.values(k));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

namespace {

// Gradient of f(U) = sum_k ||<k|rho'|k>||_F^2 along U -> U exp(X) is 2 Tr(X C) with
// C_ij = Tr[(rho'_ii - rho'_jj) rho'_ij]; C is anti-Hermitian and X = -C ascends.
ComplexMatrix block_gradient(const ComplexMatrix& rotated, int dA, int dB) {
    ComplexMatrix c = ComplexMatrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i) {
        for (int j = 0; j < dA; ++j) {
            if (i == j) continue;
            const auto diff = rotated.block(i * dB, i * dB, dB, dB) - rotated.block(j * dB, j * dB, dB, dB);
            c(i, j) = trace_of_product(ComplexMatrix(diff), ComplexMatrix(rotated.block(i * dB, j * dB, dB, dB)));
        }
    }
    return c;
}

struct AscentResult {
    ComplexMatrix basis;
    double weight;  // sum_k ||<k|rho'|k>||_F^2
    long iterations;
};

AscentResult ascend(const ComplexMatrix& rho, ComplexMatrix basis, int dA, int dB,
                    const OptimizerSettings& s) {
    ComplexMatrix rotated = rotate_to_basis(rho, basis, dB);
    double weight = diagonal_block_weight(rotated, dA, dB);
    double step = 1.0;
    long it = 0;
    for (; it < s.max_iterations; ++it) {
        const ComplexMatrix c = block_gradient(rotated, dA, dB);
        const double gnorm_sq = c.squaredNorm();
        if (std::sqrt(gnorm_sq) <= s.gradient_tol) break;
        bool improved = false;
        while (step > 1e-14) {
            const ComplexMatrix trial = basis * exp_anti_hermitian(-step * c);
            const ComplexMatrix trial_rot = rotate_to_basis(rho, trial, dB);
            const double trial_weight = diagonal_block_weight(trial_rot, dA, dB);
            // Armijo condition on the predicted increase 2 * step * ||C||^2.
            if (trial_weight >= weight + 1e-4 * 2.0 * step * gnorm_sq) {
                basis = trial;
                rotated = trial_rot;
                weight = trial_weight;
                improved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    // Re-orthonormalize accumulated round-off.
    Eigen::HouseholderQR<ComplexMatrix> qr(basis);
    ComplexMatrix q = qr.householderQ();
    for (int k = 0; k < dA; ++k) {
        const Complex d = qr.matrixQR()(k, k);
        if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    return {q, weight, it};
}

}  // namespace

DiscordEstimate geometric_discord_2norm_opt(const BipartiteDensityMatrix& rho, Rng& rng,
                                            const OptimizerSettings& settings) {
    if (settings.restarts < 1) throw Error("optimizer needs at least one restart");
    const int dA = rho.dims().dA();
    const int dB = rho.dims().dB();
    const double purity = rho.purity();
    DiscordEstimate best;
    best.value = std::numeric_limits<double>::infinity();
    best.method = DiscordMethod::Optimized;
    best.restarts = settings.restarts;
    for (int r = 0; r < settings.restarts; ++r) {
        Rng local = rng.split(static_cast<std::uint64_t>(r));
        const auto result = ascend(rho.matrix(), haar_unitary(dA, local), dA, dB, settings);
        best.iterations += result.iterations;
        const double value = purity - result.weight;
        if (value < best.value) {
            best.value = value;
            best.best_basis = result.basis;
        }
    }
    best.value = std::max(0.0, best.value);
    return best;
}

DiscordEstimate geometric_discord_2norm(const BipartiteDensityMatrix& rho, Rng& rng,
                                        const OptimizerSettings& settings) {
    if (rho.dims().dA() == 2) return geometric_discord_2norm_qubitA(rho);
    return geometric_discord_2norm_opt(rho, rng, settings);
}

namespace {

struct TraceObjective {
    const BipartiteDensityMatrix* rho;
    ComplexMatrix start;
};

// Off-diagonal anti-Hermitian generator: entry (i<j) = a + ib, entry (j,i) = -(a - ib).
ComplexMatrix generator_from(const gsl_vector* x, int dA) {
    ComplexMatrix g = ComplexMatrix::Zero(dA, dA);
    std::size_t idx = 0;
    for (int i = 0; i < dA; ++i) {
        for (int j = i + 1; j < dA; ++j) {
            const Complex z(gsl_vector_get(x, idx), gsl_vector_get(x, idx + 1));
            idx += 2;
            g(i, j) = z;
            g(j, i) = -std::conj(z);
        }
    }
    return g;
}

double trace_objective(const gsl_vector* x, void* params) {
    const auto* obj = static_cast<const TraceObjective*>(params);
    const int dA = obj->rho->dims().dA();
    const ComplexMatrix basis = obj->start * exp_anti_hermitian(generator_from(x, dA));
    return measured_trace_residual(*obj->rho, basis);
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const noexcept { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
    void operator()(gsl_vector* v) const noexcept { gsl_vector_free(v); }
};

}  // namespace

DiscordEstimate trace_discord_upper(const BipartiteDensityMatrix& rho, int restarts, Rng& rng) {
    if (restarts < 1) throw Error("trace_discord_upper needs at least one restart");
    gsl_set_error_handler_off();
    const int dA = rho.dims().dA();
    const std::size_t nparams = static_cast<std::size_t>(dA * (dA - 1));

    DiscordEstimate best;
    best.norm = 1;
    best.method = DiscordMethod::Optimized;
    best.is_upper_bound_only = true;
    best.restarts = restarts;
    best.value = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        Rng local = rng.split(static_cast<std::uint64_t>(r));
        TraceObjective objective{&rho, haar_unitary(dA, local)};
        gsl_multimin_function fn{&trace_objective, nparams, &objective};

        std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_calloc(nparams));
        std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(nparams));
        gsl_vector_set_all(step.get(), 0.3);
        std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
            gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, nparams));
        gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());

        long it = 0;
        for (; it < 2000; ++it) {
            if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), 1e-7) == GSL_SUCCESS) break;
        }
        best.iterations += it;
        const double value = gsl_multimin_fminimizer_minimum(minimizer.get());
        if (value < best.value) {
            best.value = value;
            best.best_basis = objective.start * exp_anti_hermitian(generator_from(minimizer->x, dA));
        }
    }
    best.value = std::max(0.0, best.value);
    return best;
}

}  // namespace qbound
