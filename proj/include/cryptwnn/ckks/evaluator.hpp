/**
 * @file evaluator.hpp
 * @brief Homomorphic arithmetic: add, multiply with relinearisation and rescale, alignment.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cryptwnn/ckks/ciphertext.hpp"
#include "cryptwnn/ckks/encoder.hpp"
#include "cryptwnn/ckks/keys.hpp"

namespace cryptwnn::ckks {

/// Relative tolerance for treating two scales as equal.
inline constexpr double kScaleTolerance = 1e-9;

bool scales_match(double a, double b) noexcept;

/**
 * @brief Stateless evaluator. Inputs are never mutated; every public result has size 2
 * unless documented otherwise.
 *
 * Binary operations require equal level and scale and throw AlignmentError otherwise.
 * Operations that would drop below level 1 throw DepthError.
 */
class Evaluator {
public:
    /// Without a relinearisation key only linear and plaintext operations are available.
    explicit Evaluator(ContextPtr ctx, std::optional<RelinKey> rlk = std::nullopt);

    const ContextPtr& context() const noexcept { return ctx_; }
    const Encoder& encoder() const noexcept { return encoder_; }

    Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
    Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const;
    Ciphertext add_plain(const Ciphertext& a, const Plaintext& b) const;
    Ciphertext negate(const Ciphertext& a) const;
    /// Add a real constant encoded at the ciphertext's own scale.
    Ciphertext add_constant(const Ciphertext& a, double value) const;
    /// Multiply by a small signed integer; no level or scale change.
    Ciphertext multiply_integer(const Ciphertext& a, std::int64_t k) const;

    /// Tensor product, size 3, no rescale. Scale is the product of the input scales.
    Ciphertext tensor(const Ciphertext& a, const Ciphertext& b) const;
    Ciphertext relinearize(const Ciphertext& a) const;
    /// Divide by the last active prime with rounding; level - 1.
    Ciphertext rescale(const Ciphertext& a) const;

    /// ct x ct: tensor, relinearise, rescale.
    Ciphertext multiply(const Ciphertext& a, const Ciphertext& b) const;
    Ciphertext square(const Ciphertext& a) const { return multiply(a, a); }
    /// ct x pt: pointwise product, rescale.
    Ciphertext multiply_plain(const Ciphertext& a, const Plaintext& b) const;
    /**
     * @brief Multiply by a real constant and rescale.
     *
     * The constant is encoded so the output scale equals result_scale when given, and the
     * input scale otherwise.
     */
    Ciphertext multiply_constant(const Ciphertext& a, double value,
                                 std::optional<double> result_scale = std::nullopt) const;

    /// Drop primes down to `level` without rounding; scale unchanged.
    Ciphertext mod_switch_to(const Ciphertext& a, std::size_t level) const;
    /// Bring a ciphertext to a lower level with an exact target scale (one multiplicative level).
    Ciphertext align(const Ciphertext& a, std::size_t level, double scale) const;

    /// Sum of products a_i * b_i with a single relinearisation and rescale.
    Ciphertext inner_product(const std::vector<const Ciphertext*>& a,
                             const std::vector<const Ciphertext*>& b) const;

    void add_inplace(Ciphertext& acc, const Ciphertext& b) const;

private:
    void require_aligned(const Ciphertext& a, const Ciphertext& b, const char* op) const;
    void require_relin_key() const;

    ContextPtr ctx_;
    std::optional<RelinKey> rlk_;
    Encoder encoder_;
};

/**
 * @brief Sums size-3 tensor products lazily; finish() relinearises and rescales once.
 */
class ProductAccumulator {
public:
    explicit ProductAccumulator(const Evaluator& eval) : eval_(&eval) {}

    void add_product(const Ciphertext& a, const Ciphertext& b);
    bool empty() const noexcept { return !acc_.has_value(); }
    /// Relinearised and rescaled sum; throws if nothing was accumulated.
    Ciphertext finish() const;

private:
    const Evaluator* eval_;
    std::optional<Ciphertext> acc_;
};

}  // namespace cryptwnn::ckks
