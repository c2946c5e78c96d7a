/**
 * @file train.hpp
 * @brief Momentum mini-batch SGD, the shared batch schedule and stopping rule, and the
 * plaintext trainer.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptwnn/data/dataset.hpp"
#include "cryptwnn/metrics/metrics.hpp"
#include "cryptwnn/wnn/model.hpp"

namespace cryptwnn::wnn {

/**
 * @brief How the convergence test combines the loss change and the accuracy target.
 *
 * `literal`: keep training while dE >= epsilon OR accuracy <= target (stop only when both
 * fail). `any`: stop as soon as dE < epsilon OR accuracy > target. Without a target both
 * reduce to the dE test.
 */
enum class StopRule { literal, any };

std::string_view to_string(StopRule r) noexcept;
StopRule stop_rule_from_string(std::string_view s);

struct TrainConfig {
    double eta = 0.1;
    double alpha = 0.9;
    std::size_t batch_size = 32;
    double epsilon = 1e-4;
    std::size_t max_epochs = 100;
    std::optional<double> target_accuracy;
    std::uint64_t seed = 1;
    /// Elementwise cap on each update delta; 0 disables it.
    double max_step = 0.0;
    StopRule stop_rule = StopRule::literal;

    /// Throws std::invalid_argument for eta <= 0, alpha outside [0, 1), epsilon <= 0,
    /// batch_size = 0 or a negative max_step.
    void validate() const;
};

/// Parameter magnitude treated as divergence.
inline constexpr double kDivergenceBound = 1e6;

/// Seeded generator for parameter initialisation, derived from TrainConfig::seed.
std::mt19937_64 init_rng(std::uint64_t seed);

/**
 * @brief Per-epoch shuffled partition of sample indices into batches.
 *
 * Epoch e is a pure function of (seed, e); the last batch may be short.
 */
class BatchSchedule {
public:
    BatchSchedule(std::size_t n_samples, std::size_t batch_size, std::uint64_t seed);
    std::vector<std::vector<std::size_t>> epoch(std::size_t e) const;
    std::size_t batches_per_epoch() const noexcept;

private:
    std::size_t n_;
    std::size_t batch_;
    std::uint64_t seed_;
};

/**
 * @brief One momentum step per parameter: delta = -eta g + alpha delta_prev (capped at
 * +-max_step when enabled), param += delta, delta_prev = delta. Dilations are then clamped
 * to |a| >= kMinDilation.
 */
void update_step(WnnParams& p, MomentumState& m, const Gradients& g, const TrainConfig& cfg);

/// Clamp a dilation away from zero, keeping its sign (zero maps to +kMinDilation).
double clamp_dilation(double a) noexcept;

/// Cap a delta to +-max_step; identity when max_step is 0.
double clip_step(double delta, double max_step) noexcept;

/// True if some parameter is non-finite or exceeds kDivergenceBound in magnitude.
bool diverged(const ParamGroups& p) noexcept;

/// Stopping-rule state shared by the plaintext and encrypted trainers.
class ConvergenceMonitor {
public:
    explicit ConvergenceMonitor(const TrainConfig& cfg) : cfg_(cfg) {}
    void start_epoch() noexcept { correct_ = seen_ = 0; }
    /**
     * @brief Record one batch given its labels and pre-update scores. Returns true if
     * training should stop.
     */
    bool observe_batch(std::span<const int> labels, std::span<const double> scores);
    double last_mse() const noexcept { return last_mse_; }
    double last_delta() const noexcept { return last_delta_; }
    /// Accuracy over samples seen so far in the current epoch.
    double running_accuracy() const noexcept;
    /// Set when observe_batch saw a non-finite batch loss.
    bool loss_nonfinite() const noexcept { return nonfinite_; }

private:
    TrainConfig cfg_;
    double prev_mse_ = 0.0;
    double last_mse_ = 0.0;
    double last_delta_ = 0.0;
    std::size_t correct_ = 0;
    std::size_t seen_ = 0;
    bool nonfinite_ = false;
};

struct BatchEvent {
    std::size_t epoch = 0;
    std::size_t batch = 0;
    double mse = 0.0;
    double running_accuracy = 0.0;
    double elapsed_ms = 0.0;
    /// Parameters after the update of this batch.
    const WnnParams* params = nullptr;
};

using BatchObserver = std::function<void(const BatchEvent&)>;

/// Training outcome; test metrics are filled in by the caller after evaluation.
struct TrainReport {
    /// "converged", "max_epochs" or "diverged".
    std::string status = "max_epochs";
    std::size_t epochs_run = 0;
    std::size_t batches_run = 0;
    std::vector<double> loss_trace;
    std::vector<double> epoch_seconds;
    /// Running training accuracy at the end of each epoch.
    std::vector<double> epoch_accuracy;
    double best_train_accuracy = 0.0;
    std::optional<metrics::Metrics> test_metrics;

    double mean_epoch_seconds() const noexcept;
};

struct TrainResult {
    WnnParams params;
    MomentumState momentum;
    TrainReport report;
};

/**
 * @brief Plaintext trainer. Per batch: score the batch with the current parameters,
 * average per-sample gradients, apply update_step, then consult the ConvergenceMonitor.
 * Throws data::DataError for non-binary labels.
 */
TrainResult train_plain(const data::Dataset& train, const WnnShape& shape, const TrainConfig& cfg,
                        Activation mode, const BatchObserver& observer = {});

/// Variant starting from given parameters and momentum.
TrainResult train_plain(const data::Dataset& train, WnnParams params, MomentumState momentum,
                        const TrainConfig& cfg, Activation mode, const BatchObserver& observer = {});

struct Predictions {
    std::vector<int> labels;
    std::vector<double> scores;
};

/// Label 1 iff yhat >= 0.5.
int threshold_label(double score) noexcept;

Predictions predict_labels(const WnnParams& p, const data::Dataset& d, Activation mode);

}  // namespace cryptwnn::wnn
