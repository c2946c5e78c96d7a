/**
 * @file preprocess.hpp
 * @brief Standardization, SMOTE balancing and stratified splitting.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cryptwnn/data/dataset.hpp"

namespace cryptwnn::data {

/**
 * @brief Per-feature mean and population standard deviation fitted on training data.
 *
 * File form (JSON): {"format": "cryptwnn-scaler", "version": 1, "feature_names": [...],
 * "mean": [...], "std": [...]}. Doubles are written with round-trip precision, so a
 * save/load cycle is bit-exact. A zero std marks a constant column, which maps to 0.
 */
struct Scaler {
    std::vector<std::string> feature_names;
    std::vector<double> mean;
    std::vector<double> std;

    /// (x - mean) / std per feature; constant columns become 0.
    Dataset apply(const Dataset& d) const;

    void save(const std::filesystem::path& path) const;
    static Scaler load(const std::filesystem::path& path);
    std::string to_json() const;
    static Scaler from_json(const std::string& text);

    friend bool operator==(const Scaler&, const Scaler&) = default;
};

/// Fit on `train`; logs a warning per zero-variance column.
Scaler fit_scaler(const Dataset& train);

struct Standardized {
    Scaler scaler;
    Dataset train;
    std::vector<Dataset> others;
};

/// Fit on `train` only and transform `train` plus every dataset in `apply_to`.
Standardized standardize(const Dataset& train, const std::vector<Dataset>& apply_to);

/**
 * @brief Oversample the minority class until both classes have equal counts.
 *
 * Each synthetic row is x + u (n - x) with u uniform in (0, 1), x a minority row taken in
 * round-robin order and n one of its k nearest minority neighbours (Euclidean). Original
 * rows keep their order and come first. k is capped at minority size - 1.
 * Throws DataError when the minority class has fewer than 2 rows.
 */
Dataset smote_balance(const Dataset& d, std::size_t k_neighbors, std::mt19937_64& rng);

struct SplitSpec {
    double test_fraction = 0.2;
    bool stratified = true;
    std::uint64_t seed = 0;
};

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;  ///< ascending
    std::vector<std::size_t> test_indices;   ///< ascending
};

/**
 * @brief Shuffle split. Stratified mode takes round(fraction * class size) test rows per
 * class. Throws DataError if either side would miss a class.
 */
SplitResult split(const Dataset& d, const SplitSpec& spec);

/// Uniform double in the open interval (0, 1) from 53 random bits.
double uniform_open(std::mt19937_64& rng);

}  // namespace cryptwnn::data
