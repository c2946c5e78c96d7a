/**
 * @file trainer.hpp
 * @brief Encrypted mini-batch training and testing over a RoleSplit.
 */
#pragma once

#include <vector>

#include "cryptwnn/metrics/metrics.hpp"
#include "cryptwnn/ppwnn/roles.hpp"

namespace cryptwnn::ppwnn {

struct EncryptedTrainResult {
    /// Refreshed parameters (top level) after the last batch.
    EncryptedWnnParams params;
    /// Custodian's clear copy of the same state.
    wnn::WnnParams clear_params;
    wnn::MomentumState clear_momentum;
    wnn::TrainReport report;
    /// Deepest level consumption seen in any batch, update included.
    std::size_t max_depth_consumed = 0;
};

/**
 * @brief Encrypted counterpart of wnn::train_plain with the same initialisation, batch
 * schedule and stopping rule. Per batch the engine computes gradients and the update; the
 * custodian decrypts the batch predictions for the stopping rule and refreshes the
 * parameters. BatchEvent::params points at the custodian's decrypted copy.
 */
EncryptedTrainResult train_encrypted(const EncryptedDataset& train, const wnn::WnnShape& shape,
                                     const wnn::TrainConfig& cfg, RoleSplit roles,
                                     const wnn::BatchObserver& observer = {});

/// Variant starting from given clear parameters and momentum.
EncryptedTrainResult train_encrypted(const EncryptedDataset& train, wnn::WnnParams params,
                                     wnn::MomentumState momentum, const wnn::TrainConfig& cfg, RoleSplit roles,
                                     const wnn::BatchObserver& observer = {});

struct EncryptedEvaluation {
    metrics::Metrics metrics;
    std::vector<double> scores;
    /// True labels as decrypted by the custodian.
    std::vector<int> labels;
};

/// Encrypted scoring of every sample; the custodian decrypts scores and labels.
EncryptedEvaluation test_encrypted(const EncryptedWnnParams& params, const EncryptedDataset& test, RoleSplit roles);

}  // namespace cryptwnn::ppwnn
