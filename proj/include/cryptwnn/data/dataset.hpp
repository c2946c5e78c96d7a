/**
 * @file dataset.hpp
 * @brief In-memory tabular dataset with binary labels, and the loader error type.
 */
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cryptwnn::data {

/// Load, schema, balancing or split failure. Loader messages name the row and column.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Row-major feature matrix plus labels in {0, 1}.
 *
 * `provenance` accumulates one line per stage applied since load.
 */
struct Dataset {
    std::string name;
    std::size_t n_features = 0;
    std::vector<double> features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> provenance;

    std::size_t size() const noexcept { return labels.size(); }
    bool empty() const noexcept { return labels.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * n_features, n_features};
    }
    std::span<double> row(std::size_t i) {
        return {features.data() + i * n_features, n_features};
    }

    /// Append one sample; throws DataError on arity mismatch or a non-binary label.
    void push_back(std::span<const double> x, int label);

    /// {count of label 0, count of label 1}.
    std::array<std::size_t, 2> class_counts() const noexcept;

    /// Copy with only the listed rows, in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;
};

/// Throws DataError unless every label is 0 or 1.
void require_binary_labels(const Dataset& d);

}  // namespace cryptwnn::data
