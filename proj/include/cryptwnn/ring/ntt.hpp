/**
 * @file ntt.hpp
 * @brief Negacyclic number-theoretic transform over Z_q[X]/(X^N + 1).
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cryptwnn/ring/modulus.hpp"

namespace cryptwnn::ring {

/**
 * @brief Precomputed twiddle tables for one prime.
 *
 * The forward transform maps coefficients to evaluations in bit-reversed order:
 * output slot k holds x(psi^(2 * bitrev(k) + 1)), where psi is the stored primitive
 * 2N-th root of unity.
 */
class NttTables {
public:
    NttTables(std::size_t degree, const Modulus& modulus);

    std::size_t degree() const noexcept { return n_; }
    const Modulus& modulus() const noexcept { return mod_; }
    std::uint64_t psi() const noexcept { return psi_; }

    void forward(std::uint64_t* values) const;
    /// Inverse transform including the N^-1 factor.
    void inverse(std::uint64_t* values) const;

private:
    std::size_t n_;
    Modulus mod_;
    std::uint64_t psi_;
    std::vector<std::uint64_t> psi_pows_;        ///< psi^bitrev(i)
    std::vector<std::uint64_t> psi_pows_shoup_;
    std::vector<std::uint64_t> ipsi_pows_;       ///< psi^-bitrev(i)
    std::vector<std::uint64_t> ipsi_pows_shoup_;
    std::uint64_t n_inv_;
    std::uint64_t n_inv_shoup_;
};

/// Smallest primitive 2N-th root of unity modulo q. Throws if q != 1 mod 2N.
std::uint64_t find_primitive_root(std::size_t two_n, const Modulus& modulus);

std::size_t reverse_bits(std::size_t value, int bit_count) noexcept;

}  // namespace cryptwnn::ring
