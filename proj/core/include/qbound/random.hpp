#pragma once

#include <qbound/matrix.hpp>

#include <cstdint>
#include <limits>

namespace qbound {

/// Counter-based splittable generator. Output n of a stream is mix(key + (n+1)*gamma),
/// which is the SplitMix64 sequence started at `key`. split(i) derives an independent
/// child stream, so ensemble sample i can be generated without touching shared state.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next_u64(); }
    std::uint64_t next_u64() noexcept;

    /// Child stream number `index`; does not advance this generator.
    Rng split(std::uint64_t index) const noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal (Box-Muller; the second variate of each pair is cached).
    double normal() noexcept;
    /// Real and imaginary parts independent standard normals.
    Complex complex_normal() noexcept;
    /// Exponential(1).
    double exponential() noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// n x m matrix of independent complex Gaussians.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-distributed unitary: QR of a square Ginibre matrix with R's diagonal phases removed.
ComplexMatrix haar_unitary(int n, Rng& rng);

/// Uniform unit vector in C^n.
ComplexVector haar_vector(int n, Rng& rng);

}  // namespace qbound
