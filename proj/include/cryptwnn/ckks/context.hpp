/**
 * @file context.hpp
 * @brief Validated CKKS parameters bound to concrete primes and precomputed tables.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "cryptwnn/ckks/params.hpp"
#include "cryptwnn/ring/ring.hpp"

namespace cryptwnn::ckks {

using ParamsHash = std::array<std::uint8_t, 32>;

/**
 * @brief Immutable CKKS context shared by keys, ciphertexts and evaluators.
 *
 * Prime index layout in the ring: 0 .. L-1 are data primes (level l uses the first l),
 * index L is the special prime used only inside key switching.
 */
class CkksContext {
public:
    static std::shared_ptr<const CkksContext> create(const CkksParams& params);

    const CkksParams& params() const noexcept { return params_; }
    const ring::RingParamsPtr& ring() const noexcept { return ring_; }
    std::size_t degree() const noexcept { return params_.poly_degree; }
    std::size_t top_level() const noexcept { return data_primes_; }
    std::size_t special_index() const noexcept { return data_primes_; }
    double default_scale() const noexcept { return params_.scale; }
    const ParamsHash& params_hash() const noexcept { return hash_; }
    bool insecure() const noexcept { return params_.profile != SecurityProfile::secure; }

    std::uint64_t prime(std::size_t index) const { return ring_->modulus(index).value(); }
    const ring::Modulus& modulus(std::size_t index) const { return ring_->modulus(index); }

    /// Indices of the data primes active at a level (0 .. level-1).
    std::vector<std::size_t> level_moduli(std::size_t level) const;
    /// Data primes of a level plus the special prime.
    std::vector<std::size_t> extended_moduli(std::size_t level) const;

    /// q_from^-1 mod q_to for any two distinct prime indices.
    std::uint64_t inv_mod(std::size_t from, std::size_t to) const {
        return inv_table_[from * ring_->prime_count() + to];
    }

    /// Residues of floor((Q_level - 1) / 2) in mixed-radix form, for centered CRT.
    const std::vector<std::uint64_t>& half_modulus_digits(std::size_t level) const {
        return half_digits_.at(level);
    }

    /// Powers 5^j mod 2N used by the special FFT.
    const std::vector<std::size_t>& rot_group() const noexcept { return rot_group_; }
    /// exp(2 pi i j / 2N) for j = 0 .. 2N.
    const std::vector<std::complex<double>>& ksi_pows() const noexcept { return ksi_pows_; }

private:
    explicit CkksContext(const CkksParams& params);

    CkksParams params_;
    std::size_t data_primes_;
    ring::RingParamsPtr ring_;
    ParamsHash hash_{};
    std::vector<std::uint64_t> inv_table_;
    std::vector<std::vector<std::uint64_t>> half_digits_;
    std::vector<std::size_t> rot_group_;
    std::vector<std::complex<double>> ksi_pows_;
};

using ContextPtr = std::shared_ptr<const CkksContext>;

/**
 * @brief Mixed-radix digits of the integer with the given residues (Garner's algorithm).
 *
 * digits[i] < q_i and the value equals sum_i digits[i] * prod_{k<i} q_k.
 */
void garner_digits(const CkksContext& ctx, std::size_t level, const std::uint64_t* residues,
                   std::uint64_t* digits);

/// Centered lift of residues modulo Q_level to a long double.
long double centered_lift(const CkksContext& ctx, std::size_t level, const std::uint64_t* residues);

/// Map an integral double (any magnitude representable as double) into [0, q).
std::uint64_t reduce_integral(double value, const ring::Modulus& q);

}  // namespace cryptwnn::ckks
