#include <qbound/matrix.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbound {

BipartiteDims::BipartiteDims(int dA, int dB) : dA_(dA), dB_(dB) {
    if (dA < 2 || dB < 2) {
        throw DimsError(fmt::format("subsystem dimensions must be >= 2, got {}x{}", dA, dB));
    }
}

std::string BipartiteDims::to_string() const { return fmt::format("{}x{}", dA_, dB_); }

BipartiteDims BipartiteDims::parse(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos || x == 0 || x + 1 == text.size()) {
        throw DimsError("dims must look like AxB, got '" + text + "'");
    }
    try {
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        const std::string a = text.substr(0, x);
        const std::string b = text.substr(x + 1);
        const int dA = std::stoi(a, &used_a);
        const int dB = std::stoi(b, &used_b);
        if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing");
        return BipartiteDims(dA, dB);
    } catch (const std::logic_error&) {
        throw DimsError("dims must look like AxB, got '" + text + "'");
    }
}

SchattenOrder::SchattenOrder(double p) : p_(p), infinite_(false) {
    if (std::isnan(p) || p < 1.0) {
        throw InvalidOrderError(fmt::format("Schatten order must be >= 1, got {}", p));
    }
    if (std::isinf(p)) {
        p_ = 0.0;
        infinite_ = true;
    }
}

std::string SchattenOrder::to_string() const {
    return infinite_ ? std::string("inf") : fmt::format("{}", p_);
}

HolderPair HolderPair::conjugate_of(SchattenOrder p) {
    if (p.is_infinite()) return HolderPair(p, SchattenOrder(1.0));
    if (p.value() == 1.0) return HolderPair(p, SchattenOrder::infinity());
    return HolderPair(p, SchattenOrder(p.value() / (p.value() - 1.0)));
}

HolderPair::HolderPair(SchattenOrder p, SchattenOrder q) : p_(p), q_(q) {
    const double sum = p.reciprocal() + q.reciprocal();
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidOrderError(fmt::format("orders {} and {} are not conjugate (1/p + 1/q = {})",
                                            p.to_string(), q.to_string(), sum));
    }
}

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw NonFiniteError(fmt::format("{} has non-finite entries", what));
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw NotSquareError(fmt::format("{} is {}x{}, expected square", what, m.rows(), m.cols()));
    }
}

double hermiticity_violation(const ComplexMatrix& h) {
    require_square(h);
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double default_hermitian_tol(const ComplexMatrix& h) {
    const double scale = h.size() == 0 ? 0.0 : h.cwiseAbs().maxCoeff();
    return 1e-9 * std::max(1.0, scale);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

void require_bipartite(const ComplexMatrix& m, const BipartiteDims& dims) {
    require_square(m);
    if (m.rows() != dims.total()) {
        throw DimsError(fmt::format("matrix side {} does not match dims {} (expected {})", m.rows(),
                                    dims.to_string(), dims.total()));
    }
}

}  // namespace

ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteDims& dims, Subsystem which) {
    require_bipartite(m, dims);
    const int dA = dims.dA();
    const int dB = dims.dB();
    ComplexMatrix out(m.rows(), m.cols());
    // Element <i a| M |j b> with row index i*dB + a.
    for (int i = 0; i < dA; ++i) {
        for (int j = 0; j < dA; ++j) {
            for (int a = 0; a < dB; ++a) {
                for (int b = 0; b < dB; ++b) {
                    const Complex v = m(i * dB + a, j * dB + b);
                    if (which == Subsystem::A) {
                        out(j * dB + a, i * dB + b) = v;
                    } else {
                        out(i * dB + b, j * dB + a) = v;
                    }
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteDims& dims, Subsystem which) {
    require_bipartite(m, dims);
    const int dA = dims.dA();
    const int dB = dims.dB();
    if (which == Subsystem::B) {
        ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
        for (int i = 0; i < dA; ++i)
            for (int j = 0; j < dA; ++j)
                out(i, j) = m.block(i * dB, j * dB, dB, dB).trace();
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
    for (int i = 0; i < dA; ++i) out += m.block(i * dB, i * dB, dB, dB);
    return out;
}

namespace {

ComplexMatrix symmetrized(const ComplexMatrix& h, double tol) {
    require_square(h, "Hermitian input");
    require_finite(h, "Hermitian input");
    const double violation = hermiticity_violation(h);
    const double limit = tol < 0.0 ? default_hermitian_tol(h) : tol;
    if (violation > limit) {
        throw NonHermitianError(
            fmt::format("matrix is not Hermitian: max |H - H^dagger| = {:.3e} > {:.3e}", violation,
                        limit),
            violation);
    }
    return (h + h.adjoint()) * 0.5;
}

}  // namespace

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(h, tol));
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(h, tol), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

RealVector singular_values(const ComplexMatrix& m) {
    require_finite(m);
    RealVector sv;
    const bool hermitian = m.rows() == m.cols() &&
                           hermiticity_violation(m) <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
    if (hermitian) {
        sv = hermitian_eigenvalues(m).cwiseAbs();
    } else {
        const ComplexMatrix gram = m.cols() <= m.rows() ? ComplexMatrix(m.adjoint() * m)
                                                        : ComplexMatrix(m * m.adjoint());
        sv = hermitian_eigenvalues(gram).cwiseMax(0.0).cwiseSqrt();
    }
    std::sort(sv.data(), sv.data() + sv.size(), std::greater<>());
    return sv;
}

double schatten_norm(const ComplexMatrix& m, SchattenOrder p) {
    if (m.size() == 0) return 0.0;
    const RealVector sv = singular_values(m);
    if (p.is_infinite()) return sv(0);
    const double order = p.value();
    if (order == 1.0) return sv.sum();
    if (order == 2.0) return std::sqrt(sv.squaredNorm());
    // Scale by the largest singular value so large p cannot overflow.
    const double top = sv(0);
    if (top == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i) / top, order);
    return top * std::pow(acc, 1.0 / order);
}

double holder_check(const ComplexMatrix& a, const ComplexMatrix& b, const HolderPair& pair) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimsError(fmt::format("Holder check needs equal shapes, got {}x{} and {}x{}", a.rows(),
                                    a.cols(), b.rows(), b.cols()));
    }
    const Complex overlap = (a.array() * b.array().conjugate()).sum();  // Tr(A B^dagger)
    return schatten_norm(a, pair.q()) * schatten_norm(b, pair.p()) - std::abs(overlap);
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw DimsError("trace_of_product: incompatible shapes");
    }
    return (a.array() * b.transpose().array()).sum();
}

}  // namespace qbound
