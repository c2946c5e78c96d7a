#include "cryptwnn/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace cryptwnn::metrics {
namespace {

void require_same_nonempty(std::size_t a, std::size_t b) {
    if (a == 0) throw MetricError("metric of an empty sample");
    if (a != b) {
        throw MetricError("length mismatch: " + std::to_string(a) + " labels, " + std::to_string(b) + " values");
    }
}

void require_binary(int v) {
    if (v != 0 && v != 1) throw MetricError("label " + std::to_string(v) + " is not in {0, 1}");
}

}  // namespace

Confusion confusion(std::span<const int> labels, std::span<const int> predictions) {
    require_same_nonempty(labels.size(), predictions.size());
    Confusion c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        require_binary(labels[i]);
        require_binary(predictions[i]);
        if (labels[i] == 1) {
            ++(predictions[i] == 1 ? c.tp : c.fn);
        } else {
            ++(predictions[i] == 1 ? c.fp : c.tn);
        }
    }
    return c;
}

double accuracy(std::span<const int> labels, std::span<const int> predictions) {
    const auto c = confusion(labels, predictions);
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.n());
}

double auc(std::span<const int> labels, std::span<const double> scores) {
    require_same_nonempty(labels.size(), scores.size());
    const std::size_t n = labels.size();
    for (double s : scores) {
        if (!std::isfinite(s)) throw MetricError("AUC of a non-finite score");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of positive ranks, ties sharing their average rank. Ranks are kept doubled so
    // every quantity stays an exact integer.
    long double pos_rank2 = 0;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const std::size_t avg_rank2 = i + j + 1;  // 2 * mean of ranks i+1 .. j
        for (std::size_t t = i; t < j; ++t) {
            require_binary(labels[order[t]]);
            if (labels[order[t]] == 1) {
                pos_rank2 += static_cast<long double>(avg_rank2);
                ++pos;
            }
        }
        i = j;
    }
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw MetricError("AUC is undefined when only one class is present");
    const long double p = static_cast<long double>(pos);
    const long double u2 = pos_rank2 - p * (p + 1);  // 2 * Mann-Whitney U
    return static_cast<double>(u2 / (2.0L * p * static_cast<long double>(neg)));
}

Metrics evaluate(std::span<const int> labels, std::span<const int> predictions, std::span<const double> scores) {
    Metrics m;
    m.confusion = confusion(labels, predictions);
    m.n = m.confusion.n();
    m.accuracy = static_cast<double>(m.confusion.tp + m.confusion.tn) / static_cast<double>(m.n);
    m.auc = auc(labels, scores);
    return m;
}

}  // namespace cryptwnn::metrics
