#include "cryptwnn/data/dataset.hpp"

#include <fmt/format.h>

namespace cryptwnn::data {

void Dataset::push_back(std::span<const double> x, int label) {
    if (x.size() != n_features) {
        throw DataError(fmt::format("row has {} features, dataset expects {}", x.size(), n_features));
    }
    if (label != 0 && label != 1) throw DataError(fmt::format("label {} is not binary", label));
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(label);
}

std::array<std::size_t, 2> Dataset::class_counts() const noexcept {
    std::array<std::size_t, 2> c{0, 0};
    for (int y : labels) {
        if (y == 0 || y == 1) ++c[static_cast<std::size_t>(y)];
    }
    return c;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.name = name;
    out.n_features = n_features;
    out.feature_names = feature_names;
    out.provenance = provenance;
    out.features.reserve(indices.size() * n_features);
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) throw DataError(fmt::format("row index {} out of range", i));
        auto r = row(i);
        out.features.insert(out.features.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
    }
    return out;
}

void require_binary_labels(const Dataset& d) {
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        if (d.labels[i] != 0 && d.labels[i] != 1) {
            throw DataError(fmt::format("{}: label {} at row {} is not in {{0, 1}}", d.name,
                                        d.labels[i], i));
        }
    }
}

}  // namespace cryptwnn::data
