/**
 * @file pipeline.hpp
 * @brief Table-driven preprocessing: load, verify counts, balance, split, standardize.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cryptwnn/data/dataset.hpp"
#include "cryptwnn/data/preprocess.hpp"
#include "cryptwnn/data/schema.hpp"

namespace cryptwnn::data {

struct PipelineOptions {
    SplitSpec split;
    std::uint64_t smote_seed = 0;
    std::size_t smote_k = 5;
    bool verify_checksum = true;
};

struct PreparedData {
    Dataset train;
    Dataset test;
    std::optional<Scaler> scaler;
    /// One entry per stage in execution order, e.g. "load", "smote 88/12 -> 88/88".
    std::vector<std::string> trace;
};

/**
 * @brief Run the stages selected by the schema's preprocessing flags.
 *
 * Order: load, count check, SMOTE (on the full set), split, standardize (fit on train,
 * applied once to train and test).
 */
PreparedData prepare(const DatasetSchema& schema, const PipelineOptions& options);

}  // namespace cryptwnn::data
