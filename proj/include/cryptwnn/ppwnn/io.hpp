/**
 * @file io.hpp
 * @brief Encrypted checkpoints and the per-batch training log.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "cryptwnn/ppwnn/encrypted.hpp"
#include "cryptwnn/wnn/train.hpp"

namespace cryptwnn::ppwnn {

/**
 * @brief Write `dir/manifest.json` (shape, generation, config hash, CKKS parameter hash)
 * and one binary file per ciphertext group. The directory is created if needed.
 */
void save_encrypted_checkpoint(const std::filesystem::path& dir, const ckks::CkksContext& ctx,
                               const EncryptedWnnParams& enc, const std::string& config_hash);

struct LoadedCheckpoint {
    EncryptedWnnParams params;
    std::string config_hash;
};

/// Throws ckks::ContextMismatchError when the checkpoint was written under other CKKS parameters.
LoadedCheckpoint load_encrypted_checkpoint(const std::filesystem::path& dir, const ckks::ContextPtr& ctx);

/// CSV with one line per batch: epoch, batch, decrypted batch MSE, elapsed milliseconds.
class TrainingLog {
public:
    explicit TrainingLog(const std::filesystem::path& path);
    void record(const wnn::BatchEvent& e);

private:
    std::ofstream out_;
};

}  // namespace cryptwnn::ppwnn
