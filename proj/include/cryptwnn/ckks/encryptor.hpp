/**
 * @file encryptor.hpp
 * @brief Public-key encryption and secret-key decryption.
 */
#pragma once

#include <span>

#include "cryptwnn/ckks/ciphertext.hpp"
#include "cryptwnn/ckks/keys.hpp"

namespace cryptwnn::ckks {

class Encryptor {
public:
    Encryptor(ContextPtr ctx, PublicKey pk);

    /// (b u + e0 + m, a u + e1) with ternary u; throws DepthError if pt.level exceeds the chain.
    Ciphertext encrypt(const Plaintext& pt, ring::Prng& rng) const;

    /// Encryption of the zero plaintext at the given level and scale.
    Ciphertext encrypt_zero(std::size_t level, double scale, ring::Prng& rng) const;

private:
    ContextPtr ctx_;
    PublicKey pk_;
};

class Decryptor {
public:
    Decryptor(ContextPtr ctx, SecretKey sk);

    /// c0 + c1 s; size-3 inputs are rejected (relinearise first).
    Plaintext decrypt(const Ciphertext& ct) const;

    /**
     * @brief Remaining noise budget in bits: log2(Q_level / 2) - log2(max |noise coefficient|),
     * where noise is the decrypted polynomial minus the encoding of the expected values.
     */
    double noise_budget(const Ciphertext& ct, std::span<const double> expected) const;

private:
    ContextPtr ctx_;
    SecretKey sk_;
};

}  // namespace cryptwnn::ckks
