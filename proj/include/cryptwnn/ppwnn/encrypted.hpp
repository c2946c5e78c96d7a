/**
 * @file encrypted.hpp
 * @brief Encrypted parameters, samples and datasets. One scalar per ciphertext.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "cryptwnn/ckks/ciphertext.hpp"
#include "cryptwnn/ckks/keys.hpp"
#include "cryptwnn/data/dataset.hpp"
#include "cryptwnn/ring/sampler.hpp"
#include "cryptwnn/wnn/model.hpp"

namespace cryptwnn::ppwnn {

using ckks::Ciphertext;

/// Ciphertext counterpart of wnn::ParamGroups, same layout (w row-major, i * nhn + j).
struct EncryptedGroups {
    std::vector<Ciphertext> w;
    std::vector<Ciphertext> W;
    std::vector<Ciphertext> b;
    std::vector<Ciphertext> a;

    std::array<std::vector<Ciphertext>*, 4> groups() noexcept { return {&w, &W, &b, &a}; }
    std::array<const std::vector<Ciphertext>*, 4> groups() const noexcept { return {&w, &W, &b, &a}; }
};

/**
 * @brief Encrypted model state.
 *
 * `inv_a` holds 1 / a_j as of the last refresh; updates move `values.a` only.
 */
struct EncryptedWnnParams {
    wnn::WnnShape shape;
    EncryptedGroups values;
    std::vector<Ciphertext> inv_a;
    EncryptedGroups momentum;
    std::uint64_t generation = 0;
};

/// Encrypted gradient record, one ciphertext per parameter.
using EncryptedGradients = EncryptedGroups;

struct EncryptedSample {
    std::vector<Ciphertext> x;
    Ciphertext y;
    std::size_t row = 0;  ///< plaintext index, for batch bookkeeping only
};

/// What compute-side code may hold: the context and the public evaluation keys.
struct PublicKeyBundle {
    ckks::ContextPtr context;
    ckks::PublicKey pub;
    ckks::RelinKey relin;
};

/// Where encrypted samples live. Larger-than-budget datasets are written to disk.
struct StorageOptions {
    std::size_t memory_budget_bytes = std::size_t{1} << 30;
    /// Parent of the spill directory; system temp directory when empty.
    std::filesystem::path spill_parent;
};

/**
 * @brief Sequence of encrypted samples held in memory or spilled to a private temporary
 * directory (removed on destruction). Move-only.
 */
class EncryptedDataset {
public:
    EncryptedDataset(ckks::ContextPtr ctx, std::size_t nin, std::size_t expected_size,
                     const StorageOptions& storage = {});
    EncryptedDataset(EncryptedDataset&&) noexcept;
    EncryptedDataset& operator=(EncryptedDataset&&) noexcept;
    ~EncryptedDataset();

    void push_back(EncryptedSample s);
    /// Copy of sample i (read from disk when spilled).
    EncryptedSample at(std::size_t i) const;
    std::size_t size() const noexcept;
    std::size_t nin() const noexcept;
    bool spilled() const noexcept;
    const ckks::ContextPtr& context() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Bytes of one fresh ciphertext at the top level.
std::size_t fresh_ciphertext_bytes(const ckks::CkksContext& ctx);

/// Largest feature magnitude accepted for encryption.
inline constexpr double kMaxFeatureMagnitude = 100.0;

/**
 * @brief Encrypt every feature and label as a fresh scalar ciphertext at the top level.
 * Throws std::range_error when some |feature| exceeds kMaxFeatureMagnitude.
 */
EncryptedDataset encrypt_dataset(const data::Dataset& d, const PublicKeyBundle& keys, ring::Prng& rng,
                                 const StorageOptions& storage = {});

}  // namespace cryptwnn::ppwnn
