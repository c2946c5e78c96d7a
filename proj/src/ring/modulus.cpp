#include "cryptwnn/ring/modulus.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace cryptwnn::ring {

Modulus::Modulus(std::uint64_t value) : value_(value) {
    if (value < 2 || std::bit_width(value) > kMaxModulusBits) {
        throw std::invalid_argument("modulus must lie in [2, 2^61): got " + std::to_string(value));
    }
    const u128 ratio = ~static_cast<u128>(0) / value;
    ratio_lo_ = static_cast<std::uint64_t>(ratio);
    ratio_hi_ = static_cast<std::uint64_t>(ratio >> 64);
    bits_ = std::bit_width(value);
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t exp) const noexcept {
    std::uint64_t result = 1 % value_;
    base = reduce(base);
    while (exp) {
        if (exp & 1) result = mul(result, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return result;
}

std::uint64_t Modulus::inverse(std::uint64_t a) const {
    a = reduce(a);
    if (a == 0) throw std::domain_error("zero has no modular inverse");
    // Extended Euclid on signed 128-bit to avoid overflow.
    __int128 t = 0, new_t = 1;
    __int128 r = value_, new_r = a;
    while (new_r != 0) {
        __int128 quotient = r / new_r;
        __int128 tmp = t - quotient * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - quotient * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::domain_error("value is not invertible modulo q");
    if (t < 0) t += value_;
    return static_cast<std::uint64_t>(t);
}

namespace {

std::uint64_t powmod_u128(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    u128 result = 1, base = b % m;
    while (e) {
        if (e & 1) result = result * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u128(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = static_cast<std::uint64_t>(static_cast<u128>(x) * x % n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> generate_ntt_primes(std::size_t degree, const std::vector<int>& bit_sizes) {
    if (degree < 2 || !std::has_single_bit(degree)) {
        throw std::invalid_argument("ring degree must be a power of two >= 2");
    }
    const std::uint64_t step = 2 * static_cast<std::uint64_t>(degree);
    std::vector<std::uint64_t> primes;
    primes.reserve(bit_sizes.size());
    for (int bits : bit_sizes) {
        if (bits < 2 || bits > kMaxModulusBits) {
            throw std::invalid_argument("prime bit size out of range: " + std::to_string(bits));
        }
        const std::uint64_t upper = 1ULL << bits;
        const std::uint64_t lower = 1ULL << (bits - 1);
        // Largest value below 2^bits that is 1 mod 2N.
        std::uint64_t candidate = upper - step + 1;
        bool found = false;
        while (candidate > lower) {
            if (is_prime(candidate) &&
                std::find(primes.begin(), primes.end(), candidate) == primes.end()) {
                found = true;
                break;
            }
            candidate -= step;
        }
        if (!found) {
            throw std::invalid_argument("not enough " + std::to_string(bits) +
                                        "-bit primes congruent to 1 mod " + std::to_string(step));
        }
        primes.push_back(candidate);
    }
    return primes;
}

}  // namespace cryptwnn::ring
