/**
 * @file encoder.hpp
 * @brief Canonical-embedding encoder for real vectors.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cryptwnn/ckks/ciphertext.hpp"
#include "cryptwnn/ckks/context.hpp"

namespace cryptwnn::ckks {

/**
 * @brief Encodes up to N/2 reals into a plaintext polynomial and back.
 *
 * A vector of length n is padded to the next power of two s and packed sparsely with
 * gap N/(2s). A single value becomes the constant polynomial round(value * scale).
 * Imaginary slot components are always zero.
 */
class Encoder {
public:
    explicit Encoder(ContextPtr ctx);

    const ContextPtr& context() const noexcept { return ctx_; }

    /// Throws std::length_error above slot capacity, std::range_error on modulus overflow.
    Plaintext encode(std::span<const double> values, std::size_t level, double scale) const;
    Plaintext encode(double value, std::size_t level, double scale) const;

    /// First `count` slot values; `count` defaults to one slot.
    std::vector<double> decode(const Plaintext& pt, std::size_t count = 1) const;
    double decode_scalar(const Plaintext& pt) const { return decode(pt, 1).front(); }

    /**
     * @brief Real polynomial coefficients (unscaled, unrounded) whose canonical embedding
     * equals the zero-padded values.
     */
    std::vector<double> unrounded_coefficients(std::span<const double> values) const;

    /// Special FFT: coefficient-side vector to slot values (in place, size a power of two).
    void fft_special(std::vector<std::complex<double>>& vals) const;
    void fft_special_inv(std::vector<std::complex<double>>& vals) const;

private:
    static std::size_t padded_slots(std::size_t n);

    ContextPtr ctx_;
};

}  // namespace cryptwnn::ckks
