#include "cryptwnn/data/pipeline.hpp"

#include <fmt/format.h>

#include "cryptwnn/data/loader.hpp"

namespace cryptwnn::data {

PreparedData prepare(const DatasetSchema& schema, const PipelineOptions& options) {
    PreparedData out;
    const auto path = schema.csv_path();
    if (options.verify_checksum && !schema.sha256.empty()) {
        const auto actual = file_sha256(path);
        if (actual != schema.sha256) {
            throw DataError(fmt::format("{}: checksum mismatch for {} (got {}, expected {})", schema.name,
                                        path.string(), actual, schema.sha256));
        }
        out.trace.push_back("checksum");
    }
    Dataset d = load_dataset(path, schema);
    out.trace.push_back("load");
    if (schema.preprocessing.ordinal_encode) out.trace.push_back("ordinal-encode");
    check_expected_counts(d, schema);
    out.trace.push_back(fmt::format("counts {} ({}/{})", d.size(), schema.expected_class0, schema.expected_class1));

    if (schema.preprocessing.smote) {
        const auto before = d.class_counts();
        std::mt19937_64 rng(options.smote_seed);
        d = smote_balance(d, options.smote_k, rng);
        const auto after = d.class_counts();
        out.trace.push_back(fmt::format("smote {}/{} -> {}/{}", before[0], before[1], after[0], after[1]));
    }

    auto parts = split(d, options.split);
    out.trace.push_back(fmt::format("split {}/{}", parts.train.size(), parts.test.size()));

    if (schema.preprocessing.standardize) {
        auto st = standardize(parts.train, {parts.test});
        out.scaler = std::move(st.scaler);
        out.train = std::move(st.train);
        out.test = std::move(st.others.front());
        out.trace.push_back("standardize");
    } else {
        out.train = std::move(parts.train);
        out.test = std::move(parts.test);
    }
    return out;
}

}  // namespace cryptwnn::data
