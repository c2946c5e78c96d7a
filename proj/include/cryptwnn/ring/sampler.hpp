/**
 * @file sampler.hpp
 * @brief Seeded ChaCha20 generator and the ternary, gaussian and uniform ring samplers.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cryptwnn/ring/ring.hpp"

namespace cryptwnn::ring {

/// Standard deviation of the error distribution.
inline constexpr double kErrorStdDev = 3.2;
/// Gaussian draws are rejected beyond this many standard deviations.
inline constexpr double kErrorTailCut = 6.0;

/**
 * @brief Deterministic stream generator keyed by a 64-bit seed.
 *
 * Not thread-safe; give each concurrent user its own instance.
 */
class Prng {
public:
    explicit Prng(std::uint64_t seed);
    /// Seeded from the operating system entropy source.
    static Prng from_entropy();

    void fill(std::uint8_t* out, std::size_t len);
    std::uint64_t next_u64();
    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_unit();
    /// Uniform double in the open interval (0, 1).
    double uniform_open();
    /// Derive an independent child generator.
    Prng split();

private:
    void refill();

    std::array<std::uint8_t, 32> key_{};
    std::uint64_t nonce_ = 0;
    std::array<std::uint8_t, 4096> buffer_{};
    std::size_t pos_ = 4096;
};

enum class SampleKind { ternary, gaussian, uniform };

std::vector<std::int64_t> sample_ternary_coeffs(std::size_t n, Prng& rng);
std::vector<std::int64_t> sample_gaussian_coeffs(std::size_t n, Prng& rng,
                                                 double sigma = kErrorStdDev);

/// Sample a coefficient-domain element over the given primes.
RingElem sample(SampleKind kind, const RingParamsPtr& params, const std::vector<std::size_t>& moduli,
                Prng& rng);

}  // namespace cryptwnn::ring
