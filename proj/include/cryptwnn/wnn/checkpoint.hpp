/**
 * @file checkpoint.hpp
 * @brief Parameter checkpoints as JSON text.
 *
 * Layout: {"format": "cryptwnn-wnn-params", "version": 1,
 *          "shape": {"nin", "nhn", "nout"},
 *          "params": {"w", "W", "b", "a"},
 *          "momentum": {"w", "W", "b", "a"}   (optional)}
 * Input weights are row-major (w[i * nhn + j]). Numbers use round-trip precision.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cryptwnn/wnn/model.hpp"

namespace cryptwnn::wnn {

struct Checkpoint {
    WnnParams params;
    std::optional<MomentumState> momentum;
};

std::string checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace cryptwnn::wnn
