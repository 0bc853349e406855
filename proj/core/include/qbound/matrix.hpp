#pragma once

#include <qbound/errors.hpp>

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace qbound {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Subsystem { A, B };

/// Dimensions of a bipartite Hilbert space H_A (x) H_B. Both factors must be at least 2.
/// No ordering between dA and dB is imposed.
class BipartiteDims {
public:
    BipartiteDims(int dA, int dB);

    int dA() const noexcept { return dA_; }
    int dB() const noexcept { return dB_; }
    int total() const noexcept { return dA_ * dB_; }
    /// The smaller local dimension, used as `d` in the historical d-1 bounds.
    int min_side() const noexcept { return dA_ < dB_ ? dA_ : dB_; }

    std::string to_string() const;  // "2x4"
    static BipartiteDims parse(const std::string& text);

    friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;

private:
    int dA_;
    int dB_;
};

/// Order p of a Schatten norm. p = infinity is a distinguished state, not a large double.
class SchattenOrder {
public:
    /// Throws InvalidOrderError for p < 1 or NaN. +inf maps onto the sentinel.
    explicit SchattenOrder(double p);
    static SchattenOrder infinity() noexcept { return SchattenOrder(); }

    bool is_infinite() const noexcept { return infinite_; }
    /// Finite order value; only meaningful when !is_infinite().
    double value() const noexcept { return p_; }
    /// 1/p with 1/inf == 0 exactly.
    double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / p_; }

    std::string to_string() const;

    friend bool operator==(const SchattenOrder& a, const SchattenOrder& b) noexcept {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
    }

private:
    SchattenOrder() noexcept : p_(0.0), infinite_(true) {}
    double p_;
    bool infinite_;
};

/// Conjugate exponents with 1/p + 1/q = 1.
class HolderPair {
public:
    /// Builds (p, q) with q the exact conjugate of p: 1 <-> inf, 2 <-> 2, otherwise p/(p-1).
    static HolderPair conjugate_of(SchattenOrder p);
    /// Throws InvalidOrderError unless 1/p + 1/q == 1 within 1e-12.
    HolderPair(SchattenOrder p, SchattenOrder q);

    SchattenOrder p() const noexcept { return p_; }
    SchattenOrder q() const noexcept { return q_; }

private:
    SchattenOrder p_;
    SchattenOrder q_;
};

struct HermitianEigensystem {
    RealVector values;     // ascending
    ComplexMatrix vectors; // orthonormal columns, vectors.col(i) pairs with values(i)
};

void require_finite(const ComplexMatrix& m, const char* what = "matrix");
void require_square(const ComplexMatrix& m, const char* what = "matrix");

/// Largest absolute entry of H - H^dagger.
double hermiticity_violation(const ComplexMatrix& h);
/// 1e-9 * max(1, largest absolute entry of H).
double default_hermitian_tol(const ComplexMatrix& h);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteDims& dims,
                                Subsystem which = Subsystem::A);

ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteDims& dims, Subsystem which);

/// Eigen-decomposition of (H + H^dagger)/2. Throws NonHermitianError when the
/// anti-Hermitian part exceeds tol; tol < 0 selects default_hermitian_tol(H).
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol = -1.0);
RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol = -1.0);

/// Singular values, descending. Hermitian inputs use |eigenvalues|; others use
/// sqrt of the eigenvalues of M^dagger M with negative round-off clamped.
RealVector singular_values(const ComplexMatrix& m);

double schatten_norm(const ComplexMatrix& m, SchattenOrder p);

/// ||A||_q ||B||_p - |Tr(A B^dagger)|. Nonnegative up to round-off.
double holder_check(const ComplexMatrix& a, const ComplexMatrix& b, const HolderPair& pair);

/// tr(A B) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qbound
