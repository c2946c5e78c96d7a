#include "cryptwnn/data/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace cryptwnn::data {

double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Scaler fit_scaler(const Dataset& train) {
    if (train.empty()) throw DataError("cannot fit a scaler on an empty dataset");
    const std::size_t n = train.size();
    const std::size_t m = train.n_features;
    Scaler s;
    s.feature_names = train.feature_names;
    s.mean.assign(m, 0.0);
    s.std.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = train.row(i);
        for (std::size_t j = 0; j < m; ++j) s.mean[j] += r[j];
    }
    for (auto& v : s.mean) v /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = train.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            const double d = r[j] - s.mean[j];
            s.std[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        s.std[j] = std::sqrt(s.std[j] / static_cast<double>(n));
        // Relative cutoff so rounding residue in a constant column does not count as spread.
        if (s.std[j] <= 1e-12 * std::max(1.0, std::abs(s.mean[j]))) {
            s.std[j] = 0.0;
            spdlog::warn("{}: feature '{}' has zero variance; it maps to 0", train.name,
                         j < train.feature_names.size() ? train.feature_names[j] : std::to_string(j));
        }
    }
    return s;
}

Dataset Scaler::apply(const Dataset& d) const {
    if (d.n_features != mean.size()) {
        throw DataError(fmt::format("scaler has {} features, dataset {} has {}", mean.size(), d.name,
                                    d.n_features));
    }
    Dataset out = d;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto r = out.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = std[j] == 0.0 ? 0.0 : (r[j] - mean[j]) / std[j];
    }
    out.provenance.push_back("standardized with training-set mean/std");
    return out;
}

std::string Scaler::to_json() const {
    nlohmann::json j;
    j["format"] = "cryptwnn-scaler";
    j["version"] = 1;
    j["feature_names"] = feature_names;
    j["mean"] = mean;
    j["std"] = std;
    return j.dump(2);
}

Scaler Scaler::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("format") != "cryptwnn-scaler" || j.at("version") != 1) {
            throw DataError("not a version 1 scaler record");
        }
        Scaler s;
        s.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        s.mean = j.at("mean").get<std::vector<double>>();
        s.std = j.at("std").get<std::vector<double>>();
        if (s.mean.size() != s.std.size()) throw DataError("scaler mean/std length mismatch");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("scaler record: {}", e.what()));
    }
}

void Scaler::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    out << to_json() << '\n';
}

Scaler Scaler::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

Standardized standardize(const Dataset& train, const std::vector<Dataset>& apply_to) {
    Standardized out;
    out.scaler = fit_scaler(train);
    out.train = out.scaler.apply(train);
    for (const auto& d : apply_to) out.others.push_back(out.scaler.apply(d));
    return out;
}

Dataset smote_balance(const Dataset& d, std::size_t k_neighbors, std::mt19937_64& rng) {
    const auto counts = d.class_counts();
    if (counts[0] == counts[1]) return d;
    const int minority = counts[0] < counts[1] ? 0 : 1;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.labels[i] == minority) idx.push_back(i);
    }
    const std::size_t m = idx.size();
    if (m < 2) {
        throw DataError(fmt::format("{}: SMOTE needs at least 2 minority rows, found {}", d.name, m));
    }
    const std::size_t k = std::min(k_neighbors == 0 ? std::size_t{1} : k_neighbors, m - 1);

    // k nearest minority neighbours of each minority row, ties broken by position.
    std::vector<std::vector<std::size_t>> nn(m);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t a = 0; a < m; ++a) {
        dist.clear();
        const auto ra = d.row(idx[a]);
        for (std::size_t b = 0; b < m; ++b) {
            if (b == a) continue;
            const auto rb = d.row(idx[b]);
            double s = 0.0;
            for (std::size_t j = 0; j < ra.size(); ++j) s += (ra[j] - rb[j]) * (ra[j] - rb[j]);
            dist.emplace_back(s, b);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        for (std::size_t t = 0; t < k; ++t) nn[a].push_back(dist[t].second);
    }

    Dataset out = d;
    const std::size_t need = counts[1 - minority] - counts[minority];
    std::vector<double> x(d.n_features);
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t a = s % m;
        const std::size_t b = nn[a][static_cast<std::size_t>(rng() % k)];
        const double u = uniform_open(rng);
        const auto ra = d.row(idx[a]);
        const auto rb = d.row(idx[b]);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = ra[j] + u * (rb[j] - ra[j]);
        out.push_back(x, minority);
    }
    const auto c = out.class_counts();
    out.provenance.push_back(fmt::format("SMOTE (k = {}): {}/{} -> {}/{}", k, counts[0], counts[1], c[0], c[1]));
    return out;
}

SplitResult split(const Dataset& d, const SplitSpec& spec) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw DataError(fmt::format("test fraction {} is not in (0, 1)", spec.test_fraction));
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<std::size_t> test;
    std::vector<std::size_t> train;
    auto take = [&](std::vector<std::size_t> pool) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto n_test = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(pool.size())));
        test.insert(test.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_test));
        train.insert(train.end(), pool.begin() + static_cast<std::ptrdiff_t>(n_test), pool.end());
    };
    if (spec.stratified) {
        for (int cls = 0; cls < 2; ++cls) {
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (d.labels[i] == cls) pool.push_back(i);
            }
            take(std::move(pool));
        }
    } else {
        std::vector<std::size_t> pool(d.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        take(std::move(pool));
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    SplitResult r{d.subset(train), d.subset(test), std::move(train), std::move(test)};
    for (const Dataset* part : {&r.train, &r.test}) {
        const auto c = part->class_counts();
        if (c[0] == 0 || c[1] == 0) {
            throw DataError(fmt::format("{}: split at fraction {} leaves a class absent from one side",
                                        d.name, spec.test_fraction));
        }
    }
    const std::string note = fmt::format("split {}: {} train / {} test (seed {})",
                                         spec.stratified ? "stratified" : "random", r.train.size(),
                                         r.test.size(), spec.seed);
    r.train.provenance.push_back(note);
    r.test.provenance.push_back(note);
    return r;
}

}  // namespace cryptwnn::data
