/**
 * @file roles.hpp
 * @brief The two trust roles of encrypted training.
 *
 * KeyCustodian owns the secret key: it encrypts initial parameters, decrypts and
 * re-encrypts them at every refresh, and decrypts predictions for the stopping rule and
 * for evaluation. ComputeEngine runs the homomorphic circuit and is built from a
 * PublicKeyBundle only; none of its operations takes secret-key material.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "cryptwnn/ckks/encoder.hpp"
#include "cryptwnn/ckks/encryptor.hpp"
#include "cryptwnn/ckks/evaluator.hpp"
#include "cryptwnn/ppwnn/encrypted.hpp"
#include "cryptwnn/wnn/train.hpp"

namespace cryptwnn::ppwnn {

/// Levels consumed by the forward pass (output yhat).
inline constexpr std::size_t kForwardDepth = 6;
/// Levels consumed by one full batch step (forward, gradients, update).
inline constexpr std::size_t kTrainingDepth = 10;

class KeyCustodian {
public:
    /// Generates a fresh key set from `seed`.
    KeyCustodian(ckks::ContextPtr ctx, std::uint64_t seed);
    /// Adopts an existing key set; encryption randomness is drawn from `seed`.
    KeyCustodian(ckks::KeySet keys, std::uint64_t seed);

    PublicKeyBundle public_bundle() const;
    const ckks::ContextPtr& context() const noexcept { return keys_.context; }
    const ckks::KeySet& keys() const noexcept { return keys_; }

    /// Fresh top-level encryption of clear parameters (dilations clamped, inv_a = 1 / a).
    EncryptedWnnParams encrypt_params(const wnn::WnnParams& p, const wnn::MomentumState& m,
                                      std::uint64_t generation = 0);

    /// Decrypt-clamp-reencrypt without changing values; generation + 1.
    EncryptedWnnParams refresh(const EncryptedWnnParams& enc);

    /**
     * @brief Refresh after an encrypted update. Each decrypted delta d is capped at
     * +-max_step (0 = no cap); when the cap applies the parameter becomes the retained
     * start-of-batch value plus the capped delta, otherwise its decrypted value.
     * Requires the retained state of the same generation.
     */
    EncryptedWnnParams refresh_after_update(const EncryptedWnnParams& enc, double max_step);

    /// Decrypted parameters and momentum (no clamping); inv_a is not included.
    std::pair<wnn::WnnParams, wnn::MomentumState> decrypt_params(const EncryptedWnnParams& enc) const;
    std::vector<double> decrypt_inv_a(const EncryptedWnnParams& enc) const;

    double decrypt_value(const Ciphertext& ct) const;
    std::vector<double> decrypt_values(std::span<const Ciphertext> cts) const;
    /// Decrypted labels rounded to {0, 1}.
    std::vector<int> decrypt_labels(std::span<const Ciphertext> cts) const;

    /// Clear state retained at the last encrypt/refresh.
    const wnn::WnnParams& current_params() const noexcept { return params_; }
    const wnn::MomentumState& current_momentum() const noexcept { return momentum_; }
    std::uint64_t generation() const noexcept { return generation_; }

    ring::Prng& rng() noexcept { return rng_; }

private:
    EncryptedWnnParams encrypt_state(std::uint64_t generation);
    Ciphertext encrypt_value(double v);

    ckks::KeySet keys_;
    ring::Prng rng_;
    ckks::Encoder encoder_;
    ckks::Encryptor encryptor_;
    ckks::Decryptor decryptor_;
    wnn::WnnParams params_;
    wnn::MomentumState momentum_;
    std::uint64_t generation_ = 0;
};

/// Levels observed during one engine call.
struct DepthReport {
    std::size_t top_level = 0;
    std::size_t min_level = 0;  ///< deepest level produced
    std::size_t consumed() const noexcept { return top_level - min_level; }
};

/// Parameter products shared by all samples of a batch: w_ij / a_j, b_j / a_j, W_j / a_j.
struct BatchPrep {
    std::vector<Ciphertext> w_scaled;
    std::vector<Ciphertext> b_scaled;
    std::vector<Ciphertext> W_scaled;
};

/// Forward intermediates kept for the gradient pass.
struct ForwardTrace {
    Ciphertext yhat;
    std::vector<Ciphertext> t;
    std::vector<Ciphertext> t2;
    std::vector<Ciphertext> f;
    std::vector<Ciphertext> t3;
};

struct BatchOutput {
    EncryptedGradients gradients;
    std::vector<Ciphertext> yhat;  ///< per sample, in batch order
    std::vector<Ciphertext> y;     ///< label ciphertexts, in batch order
    DepthReport depth;
};

class ComputeEngine {
public:
    explicit ComputeEngine(PublicKeyBundle keys);

    const ckks::ContextPtr& context() const noexcept { return keys_.context; }

    BatchPrep prepare(const EncryptedWnnParams& enc) const;

    /**
     * @brief Network output and intermediates, t_j = sum_i (w_ij / a_j) x_i - b_j / a_j and
     * f = 1 - t^2 + t^4 / 2. Throws ckks::DepthError naming the required depth when the
     * chain is too short.
     */
    ForwardTrace forward(const BatchPrep& prep, const EncryptedWnnParams& enc, const EncryptedSample& s) const;
    ForwardTrace forward(const EncryptedWnnParams& enc, const EncryptedSample& s) const;

    /// Mean per-sample gradients over the listed samples.
    BatchOutput batch_gradients(const EncryptedWnnParams& enc, const EncryptedDataset& data,
                                std::span<const std::size_t> indices) const;

    /// delta = -eta g + alpha delta_prev, param += delta, for all four groups.
    EncryptedWnnParams update(const EncryptedWnnParams& enc, const EncryptedGradients& g,
                              const wnn::TrainConfig& cfg) const;

    /// Encrypted scores for the listed samples (all samples when empty).
    std::vector<Ciphertext> predict(const EncryptedWnnParams& enc, const EncryptedDataset& data,
                                    std::span<const std::size_t> indices = {}) const;

private:
    void require_depth(std::size_t depth, const char* stage) const;

    PublicKeyBundle keys_;
    ckks::Evaluator eval_;
};

/// Every public ComputeEngine operation, for interface audits.
inline constexpr auto kComputeOperations = std::make_tuple(
    &ComputeEngine::prepare,
    static_cast<ForwardTrace (ComputeEngine::*)(const BatchPrep&, const EncryptedWnnParams&,
                                                const EncryptedSample&) const>(&ComputeEngine::forward),
    static_cast<ForwardTrace (ComputeEngine::*)(const EncryptedWnnParams&, const EncryptedSample&) const>(
        &ComputeEngine::forward),
    &ComputeEngine::batch_gradients, &ComputeEngine::update, &ComputeEngine::predict);

/// The two roles of one training run.
struct RoleSplit {
    KeyCustodian& custodian;
    const ComputeEngine& engine;
};

}  // namespace cryptwnn::ppwnn
