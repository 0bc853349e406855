#include <qbound/random.hpp>

#include <cmath>
#include <numbers>

namespace qbound {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

std::uint64_t Rng::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

Rng Rng::split(std::uint64_t index) const noexcept {
    Rng child(0);
    child.key_ = mix64(mix64(key_ ^ 0xD1B54A32D192ED03ULL) + (index + 1) * kGamma);
    return child;
}

double Rng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_normal() noexcept {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

double Rng::exponential() noexcept { return -std::log(1.0 - uniform()); }

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
    return g;
}

ComplexMatrix haar_unitary(int n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (int k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

ComplexVector haar_vector(int n, Rng& rng) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v / v.norm();
}

}  // namespace qbound
