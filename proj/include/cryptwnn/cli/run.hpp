/**
 * @file run.hpp
 * @brief Experiment workflow behind the `cryptwnn` command: one training run, or a
 * plaintext/encrypted comparison over several datasets.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cryptwnn/data/schema.hpp"
#include "cryptwnn/metrics/metrics.hpp"
#include "cryptwnn/wnn/model.hpp"
#include "cryptwnn/wnn/train.hpp"

namespace cryptwnn::cli {

enum class RunMode { plain, encrypted };

std::string_view to_string(RunMode m) noexcept;
RunMode run_mode_from_string(std::string_view s);

/// A failure inside one workflow stage; what() is "<stage>: <original message>".
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(stage) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Environment variable that overrides RunConfig::output_dir.
inline constexpr const char* kOutputDirEnv = "CRYPTWNN_OUTPUT_DIR";

/// Rejected configuration, reported before any work starts.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string dataset;                  ///< registry name, or path to a *.schema.json
    std::filesystem::path dataset_dir;    ///< registry directory; built-in default when empty
    RunMode mode = RunMode::plain;
    wnn::Activation activation = wnn::Activation::exact;
    std::string profile = "test-insecure";
    wnn::TrainConfig train = default_train_config();
    /// Hidden nodes; the input width when unset.
    std::optional<std::size_t> hidden;
    /// Start from this parameter checkpoint instead of a seeded initialisation.
    std::filesystem::path init_params;
    double test_fraction = 0.2;
    std::uint64_t split_seed = 1;
    std::uint64_t smote_seed = 1;
    std::uint64_t key_seed = 1;
    std::uint64_t encrypt_seed = 2;
    std::size_t memory_budget_mb = 1024;
    bool save_encrypted_checkpoint = true;
    std::filesystem::path output_dir = "cryptwnn-out";

    /// Experiment defaults: library TrainConfig with max_step = 0.1.
    static wnn::TrainConfig default_train_config();
    /// Throws ConfigError; encrypted mode requires the polynomial activation.
    void validate() const;
};

std::string config_to_json(const RunConfig& c);
RunConfig config_from_json(const std::string& text);
/// SHA-256 (hex) of the canonical JSON form; output_dir is excluded.
std::string config_hash(const RunConfig& c);
/// Output directory after applying the environment override.
std::filesystem::path resolve_output_dir(const RunConfig& c);

struct RunReport {
    RunConfig config;
    std::string config_hash;
    std::string dataset;
    std::string display_name;
    std::string group;
    bool surrogate = false;
    std::vector<std::string> pipeline;
    std::size_t train_samples = 0;
    std::size_t test_samples = 0;
    wnn::WnnShape shape;
    wnn::TrainReport train;
    metrics::Metrics test;
    /// Levels consumed by the deepest ciphertext of any batch (encrypted runs).
    std::optional<std::size_t> depth_consumed;
    std::filesystem::path artifacts;
};

std::string report_to_json(const RunReport& r);
RunReport report_from_json(const std::string& text);

/**
 * @brief Load, preprocess, train, evaluate. Writes report.json, params.json,
 * training_log.csv, scaler.json (standardized datasets) and, for encrypted runs,
 * encrypted/ under <output>/<dataset>/<mode>.
 */
RunReport run_train(const RunConfig& cfg);

struct CompareRow {
    std::string dataset;
    std::string display_name;
    std::string group;
    bool surrogate = false;
    double plain_accuracy = 0.0;
    double plain_auc = 0.0;
    double encrypted_accuracy = 0.0;
    double encrypted_auc = 0.0;
    double plain_epoch_seconds = 0.0;
    double encrypted_epoch_seconds = 0.0;
    double accuracy_gap() const noexcept;
    double auc_gap() const noexcept;
    /// Accuracy gap above kGapFlag.
    bool flagged() const noexcept;
};

inline constexpr double kGapFlag = 0.1;

struct CompareResult {
    std::vector<CompareRow> rows;
    std::vector<RunReport> plain;
    std::vector<RunReport> encrypted;
};

/**
 * @brief For each dataset: plaintext run with `baseline` activation, then an encrypted
 * run whose target accuracy is the baseline's best training accuracy. `base.dataset` is
 * ignored. Writes comparison.txt and comparison.csv to the output directory.
 */
CompareResult run_compare(const RunConfig& base, const std::vector<std::string>& datasets,
                          wnn::Activation baseline = wnn::Activation::exact);

/// Aligned text table grouped by dataset group (health, then finance).
std::string format_compare_table(const std::vector<CompareRow>& rows);
std::string format_compare_csv(const std::vector<CompareRow>& rows);

/// Resolve `cfg.dataset` to a schema (registry name or schema path).
data::DatasetSchema resolve_schema(const RunConfig& cfg);

}  // namespace cryptwnn::cli
