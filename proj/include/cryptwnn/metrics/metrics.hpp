/**
 * @file metrics.hpp
 * @brief Accuracy, confusion counts and rank-based ROC AUC for binary labels.
 */
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace cryptwnn::metrics {

/// Raised for empty or mismatched inputs and for AUC on a single class.
class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::size_t n() const noexcept { return tp + fp + tn + fn; }
};

struct Metrics {
    double accuracy = 0.0;
    double auc = 0.0;
    std::size_t n = 0;
    Confusion confusion;
};

Confusion confusion(std::span<const int> labels, std::span<const int> predictions);

/// Fraction of exact matches.
double accuracy(std::span<const int> labels, std::span<const int> predictions);

/**
 * @brief Mann-Whitney statistic: P(score of a random positive > score of a random
 * negative), ties counted one half. Computed from average ranks in O(n log n).
 */
double auc(std::span<const int> labels, std::span<const double> scores);

/// Accuracy and confusion from thresholded predictions, AUC from raw scores.
Metrics evaluate(std::span<const int> labels, std::span<const int> predictions,
                 std::span<const double> scores);

}  // namespace cryptwnn::metrics
