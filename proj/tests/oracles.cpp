#include "oracles.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace qbound::oracle {

ComplexMatrix partial_transpose_naive(const ComplexMatrix& m, int dA, int dB) {
    const int n = dA * dB;
    ComplexMatrix out(n, n);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const int i = row / dB, a = row % dB;
            const int j = col / dB, b = col % dB;
            // <i a| M^{T_A} |j b> = <j a| M |i b>
            out(row, col) = m(j * dB + a, i * dB + b);
        }
    }
    return out;
}

double frobenius_sq(const ComplexMatrix& m) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return s;
}

namespace {

ComplexMatrix kron_explicit(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < b.rows(); ++k)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

double trace_norm_svd(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().sum();
}

Eigen::Vector3d from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                   double step, int max_iter = 5000) {
    gsl_set_error_handler_off();
    const std::size_t n = x0.size();
    struct Ctx {
        const std::function<double(const std::vector<double>&)>* f;
        std::size_t n;
    } ctx{&f, n};
    gsl_multimin_function fn;
    fn.n = n;
    fn.params = &ctx;
    fn.f = [](const gsl_vector* v, void* p) {
        auto* c = static_cast<Ctx*>(p);
        std::vector<double> x(c->n);
        for (std::size_t i = 0; i < c->n; ++i) x[i] = gsl_vector_get(v, i);
        return (*c->f)(x);
    };
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* s = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
    gsl_vector_set_all(s, step);
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(m, &fn, x, s);
    for (int it = 0; it < max_iter; ++it) {
        if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-11) == GSL_SUCCESS) break;
    }
    const double best = gsl_multimin_fminimizer_minimum(m);
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(x);
    gsl_vector_free(s);
    return best;
}

}  // namespace

ComplexMatrix dephase_explicit(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& projectors, int dB) {
    const ComplexMatrix id = ComplexMatrix::Identity(dB, dB);
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& p : projectors) {
        const ComplexMatrix big = kron_explicit(p, id);
        out += big * rho * big;
    }
    return out;
}

std::vector<ComplexMatrix> bloch_projectors(const Eigen::Vector3d& e) {
    ComplexMatrix es(2, 2);
    es << Complex(e.z(), 0), Complex(e.x(), -e.y()), Complex(e.x(), e.y()), Complex(-e.z(), 0);
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    return {(id + es) * 0.5, (id - es) * 0.5};
}

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

GridResult d2_qubit_grid(const ComplexMatrix& rho, int dB, int grid_points) {
    auto residual = [&](const Eigen::Vector3d& e) {
        return frobenius_sq(rho - dephase_explicit(rho, bloch_projectors(e), dB));
    };
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_e = Eigen::Vector3d::UnitZ();
    for (const auto& e : fibonacci_sphere(grid_points)) {
        const double v = residual(e);
        if (v < best) {
            best = v;
            best_e = e;
        }
    }
    const double theta0 = std::acos(std::clamp(best_e.z(), -1.0, 1.0));
    const double phi0 = std::atan2(best_e.y(), best_e.x());
    const double refined = nelder_mead(
        [&](const std::vector<double>& x) { return residual(from_angles(x[0], x[1])); }, {theta0, phi0}, 0.02);
    return {std::min(best, refined), best};
}

double d1_qubit_grid(const ComplexMatrix& rho, int dB, int grid_points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : fibonacci_sphere(grid_points)) {
        best = std::min(best, trace_norm_svd(rho - dephase_explicit(rho, bloch_projectors(e), dB)));
    }
    return best;
}

namespace {

ComplexMatrix givens3(int p, int q, double theta, double phi) {
    ComplexMatrix g = ComplexMatrix::Identity(3, 3);
    g(p, p) = std::cos(theta);
    g(q, q) = std::cos(theta);
    g(p, q) = -std::sin(theta) * std::polar(1.0, -phi);
    g(q, p) = std::sin(theta) * std::polar(1.0, phi);
    return g;
}

ComplexMatrix qutrit_basis(const std::vector<double>& a) {
    return givens3(0, 1, a[0], a[1]) * givens3(0, 2, a[2], a[3]) * givens3(1, 2, a[4], a[5]);
}

double qutrit_residual(const ComplexMatrix& rho, int dB, const std::vector<double>& a) {
    const ComplexMatrix u = qutrit_basis(a);
    std::vector<ComplexMatrix> proj;
    for (int k = 0; k < 3; ++k) proj.push_back(u.col(k) * u.col(k).adjoint());
    return frobenius_sq(rho - dephase_explicit(rho, proj, dB));
}

}  // namespace

GridResult d2_qutrit_grid(const ComplexMatrix& rho, int dB, int steps) {
    struct Point {
        double value;
        std::vector<double> angles;
    };
    std::vector<Point> points;
    std::vector<double> a(6);
    const double half_pi = std::numbers::pi / 2;
    const double two_pi = 2 * std::numbers::pi;
    std::function<void(int)> walk = [&](int depth) {
        if (depth == 6) {
            points.push_back({qutrit_residual(rho, dB, a), a});
            return;
        }
        const bool is_theta = depth % 2 == 0;
        for (int s = 0; s < steps; ++s) {
            a[depth] = is_theta ? half_pi * s / (steps - 1) : two_pi * s / steps;
            walk(depth + 1);
        }
    };
    walk(0);
    std::sort(points.begin(), points.end(), [](const Point& x, const Point& y) { return x.value < y.value; });
    double best = points.front().value;
    const double grid_best = best;
    for (std::size_t i = 0; i < std::min<std::size_t>(5, points.size()); ++i) {
        best = std::min(best, nelder_mead([&](const std::vector<double>& x) { return qutrit_residual(rho, dB, x); },
                                          points[i].angles, 0.1, 20000));
    }
    return {best, grid_best};
}

double robustness_bisection(const ComplexMatrix& rho, int dA, int dB) {
    const int n = dA * dB;
    auto psd = [&](double s) {
        const ComplexMatrix shifted = rho + (s / n) * ComplexMatrix::Identity(n, n);
        const ComplexMatrix pt = partial_transpose_naive(shifted, dA, dB);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((pt + pt.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0) >= 0.0;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (!psd(hi)) hi *= 2.0;
    if (psd(lo)) return 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (psd(mid) ? hi : lo) = mid;
    }
    return hi;
}

Eigen::VectorXd schmidt_sq(const ComplexVector& psi, int dA, int dB) {
    ComplexMatrix c(dA, dB);
    for (int i = 0; i < dA; ++i)
        for (int a = 0; a < dB; ++a) c(i, a) = psi(i * dB + a);
    Eigen::JacobiSVD<ComplexMatrix> svd(c);
    return svd.singularValues().array().square();
}

}  // namespace qbound::oracle
