/**
 * @file modulus.hpp
 * @brief Word-sized prime modulus with Barrett and Shoup reduction helpers.
 */
#pragma once

#include <cstdint>
#include <vector>

namespace cryptwnn::ring {

using u128 = unsigned __int128;

/// Largest supported modulus bit size. Lazy NTT butterflies keep values below 4q.
inline constexpr int kMaxModulusBits = 61;

/**
 * @brief A prime modulus q < 2^61 with precomputed Barrett ratio floor(2^128 / q).
 */
class Modulus {
public:
    Modulus() = default;
    explicit Modulus(std::uint64_t value);

    std::uint64_t value() const noexcept { return value_; }
    int bit_count() const noexcept { return bits_; }

    /// Reduce any 128-bit value modulo q.
    std::uint64_t reduce(u128 x) const noexcept {
        const auto lo = static_cast<std::uint64_t>(x);
        const auto hi = static_cast<std::uint64_t>(x >> 64);
        // floor(x * ratio / 2^128), truncated to the bits that matter.
        const u128 p0 = static_cast<u128>(lo) * ratio_lo_;
        const u128 p1 = static_cast<u128>(lo) * ratio_hi_;
        const u128 p2 = static_cast<u128>(hi) * ratio_lo_;
        const u128 mid = (p0 >> 64) + static_cast<std::uint64_t>(p1) + static_cast<std::uint64_t>(p2);
        const std::uint64_t quot = hi * ratio_hi_ + static_cast<std::uint64_t>(p1 >> 64) +
                                   static_cast<std::uint64_t>(p2 >> 64) +
                                   static_cast<std::uint64_t>(mid >> 64);
        std::uint64_t r = lo - quot * value_;
        return r >= value_ ? r - value_ : r;
    }

    std::uint64_t reduce(std::uint64_t x) const noexcept {
        return reduce(static_cast<u128>(x));
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
        std::uint64_t s = a + b;
        return s >= value_ ? s - value_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
        return a >= b ? a - b : a + value_ - b;
    }
    std::uint64_t negate(std::uint64_t a) const noexcept { return a == 0 ? 0 : value_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
        return reduce(static_cast<u128>(a) * b);
    }

    std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const noexcept;
    /// Multiplicative inverse; throws std::domain_error for zero.
    std::uint64_t inverse(std::uint64_t a) const;

    /// Map a signed integer into [0, q).
    std::uint64_t from_signed(std::int64_t v) const noexcept {
        if (v >= 0) return reduce(static_cast<std::uint64_t>(v));
        std::uint64_t m = reduce(static_cast<std::uint64_t>(-(v + 1)) + 1);
        return negate(m);
    }

    /// Shoup companion floor(w * 2^64 / q) for a fixed multiplicand w < q.
    std::uint64_t shoup(std::uint64_t w) const noexcept {
        return static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / value_);
    }

    friend bool operator==(const Modulus& a, const Modulus& b) noexcept {
        return a.value_ == b.value_;
    }

private:
    std::uint64_t value_ = 0;
    std::uint64_t ratio_lo_ = 0;
    std::uint64_t ratio_hi_ = 0;
    int bits_ = 0;
};

/// x * w mod q in [0, 2q) using the Shoup companion wp of w.
inline std::uint64_t mul_shoup_lazy(std::uint64_t x, std::uint64_t w, std::uint64_t wp,
                                    std::uint64_t q) noexcept {
    const auto hi = static_cast<std::uint64_t>((static_cast<u128>(x) * wp) >> 64);
    return x * w - hi * q;
}

inline std::uint64_t mul_shoup(std::uint64_t x, std::uint64_t w, std::uint64_t wp,
                               std::uint64_t q) noexcept {
    const std::uint64_t r = mul_shoup_lazy(x, w, wp, q);
    return r >= q ? r - q : r;
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/**
 * @brief Distinct primes p = 1 (mod 2N), one per requested bit size.
 *
 * Each prime is the largest unused candidate below 2^bits. Requests with equal bit
 * sizes receive successively smaller primes.
 */
std::vector<std::uint64_t> generate_ntt_primes(std::size_t degree, const std::vector<int>& bit_sizes);

}  // namespace cryptwnn::ring
