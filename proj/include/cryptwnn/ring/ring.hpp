/**
 * @file ring.hpp
 * @brief RNS polynomials in Z_Q[X]/(X^N + 1).
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cryptwnn/ring/modulus.hpp"
#include "cryptwnn/ring/ntt.hpp"

namespace cryptwnn::ring {

/**
 * @brief Ring degree plus an ordered list of NTT-friendly primes and their tables.
 *
 * Immutable after construction; shared between elements through shared_ptr.
 */
class RingParams {
public:
    static std::shared_ptr<const RingParams> create(std::size_t degree,
                                                    const std::vector<std::uint64_t>& primes);

    std::size_t degree() const noexcept { return degree_; }
    std::size_t prime_count() const noexcept { return moduli_.size(); }
    const Modulus& modulus(std::size_t i) const { return moduli_.at(i); }
    const NttTables& ntt(std::size_t i) const { return tables_.at(i); }
    std::vector<std::uint64_t> primes() const;

private:
    RingParams(std::size_t degree, const std::vector<std::uint64_t>& primes);

    std::size_t degree_;
    std::vector<Modulus> moduli_;
    std::vector<NttTables> tables_;
};

using RingParamsPtr = std::shared_ptr<const RingParams>;

enum class Representation : std::uint8_t { coefficient = 0, ntt = 1 };
enum class Direction { forward, inverse };

/**
 * @brief A ring element stored as one residue row of length N per active prime.
 *
 * Active primes are given as indices into the owning RingParams prime list.
 * Residues are always fully reduced.
 */
class RingElem {
public:
    RingElem() = default;
    /// Zero element over the given primes.
    RingElem(RingParamsPtr params, std::vector<std::size_t> moduli,
             Representation rep = Representation::coefficient);

    /// Lift small signed coefficients into every active prime (coefficient domain).
    static RingElem from_signed(RingParamsPtr params, std::vector<std::size_t> moduli,
                                std::span<const std::int64_t> coeffs);

    const RingParamsPtr& params() const noexcept { return params_; }
    std::size_t degree() const noexcept { return params_ ? params_->degree() : 0; }
    std::size_t prime_count() const noexcept { return moduli_.size(); }
    const std::vector<std::size_t>& moduli() const noexcept { return moduli_; }
    Representation representation() const noexcept { return rep_; }
    void set_representation(Representation rep) noexcept { rep_ = rep; }

    std::uint64_t* row(std::size_t k) noexcept { return data_.data() + k * degree(); }
    const std::uint64_t* row(std::size_t k) const noexcept { return data_.data() + k * degree(); }
    const Modulus& modulus_of(std::size_t k) const { return params_->modulus(moduli_[k]); }
    std::vector<std::uint64_t>& data() noexcept { return data_; }
    const std::vector<std::uint64_t>& data() const noexcept { return data_; }

    bool is_zero() const noexcept;
    bool compatible(const RingElem& other) const noexcept;

    RingElem& operator+=(const RingElem& other);
    RingElem& operator-=(const RingElem& other);
    /// Pointwise product; both operands must be in the NTT domain.
    RingElem& operator*=(const RingElem& other);
    /// Multiply row k by scalars[k] (one residue per active prime).
    RingElem& multiply_scalar(std::span<const std::uint64_t> scalars);

    friend bool operator==(const RingElem& a, const RingElem& b) noexcept;

private:
    void require_compatible(const RingElem& other, const char* op) const;

    RingParamsPtr params_;
    std::vector<std::size_t> moduli_;
    Representation rep_ = Representation::coefficient;
    std::vector<std::uint64_t> data_;
};

RingElem add(const RingElem& a, const RingElem& b);
RingElem sub(const RingElem& a, const RingElem& b);
RingElem negate(const RingElem& a);
RingElem ntt_transform(const RingElem& elem, Direction direction);
void ntt_inplace(RingElem& elem, Direction direction);

/// a * b mod (X^N + 1); the result keeps the representation of a.
RingElem ring_mul(const RingElem& a, const RingElem& b);

/// Drop the last active prime without rounding.
RingElem drop_last(const RingElem& elem);

}  // namespace cryptwnn::ring
