#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "cryptwnn/data/loader.hpp"
#include "cryptwnn/data/pipeline.hpp"
#include "cryptwnn/data/preprocess.hpp"
#include "cryptwnn/data/schema.hpp"

using namespace cryptwnn::data;
namespace fs = std::filesystem;

namespace {

const std::vector<DatasetSchema>& registry() {
    static const auto r = load_registry(default_dataset_dir());
    return r;
}

Dataset load_named(const std::string& name) {
    const auto& s = find_schema(registry(), name);
    return load_dataset(s.csv_path(), s);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cryptwnn_data_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

DatasetSchema two_numeric_schema() {
    DatasetSchema s;
    s.name = "toy";
    s.columns = {{"a", ColumnType::numeric, {}}, {"b", ColumnType::numeric, {}}};
    s.target_column = "y";
    s.label_map = {{"0", 0}, {"1", 1}};
    return s;
}

Dataset toy(std::vector<std::vector<double>> rows, std::vector<int> labels) {
    Dataset d;
    d.name = "toy";
    d.n_features = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i) d.push_back(rows[i], labels[i]);
    return d;
}

}  // namespace

// ---- fixtures ----

struct FixtureCase {
    const char* name;
    std::size_t samples, class0, class1, features;
};

class FixtureCounts : public ::testing::TestWithParam<FixtureCase> {};

TEST_P(FixtureCounts, MatchDocumentedCounts) {
    const auto c = GetParam();
    const auto& s = find_schema(registry(), c.name);
    EXPECT_EQ(file_sha256(s.csv_path()), s.sha256);
    const auto d = load_dataset(s.csv_path(), s);
    EXPECT_EQ(d.size(), c.samples);
    EXPECT_EQ(d.class_counts()[0], c.class0);
    EXPECT_EQ(d.class_counts()[1], c.class1);
    EXPECT_EQ(d.n_features, c.features);
    EXPECT_EQ(d.feature_names.size(), c.features);
    EXPECT_NO_THROW(check_expected_counts(d, s));
}

INSTANTIATE_TEST_SUITE_P(
    AllSeven, FixtureCounts,
    ::testing::Values(FixtureCase{"haberman", 306, 225, 81, 3}, FixtureCase{"coimbra", 116, 52, 64, 9},
                      FixtureCase{"fertility", 100, 88, 12, 9}, FixtureCase{"heart", 303, 138, 165, 13},
                      FixtureCase{"diabetes", 768, 500, 268, 8}, FixtureCase{"banknote", 1372, 762, 610, 4},
                      FixtureCase{"qualitative_bankruptcy", 250, 143, 107, 6}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(Registry, OrderedByGroupThenTableRow) {
    std::vector<std::string> names;
    for (const auto& s : registry()) names.push_back(s.name);
    const std::vector<std::string> expected{"haberman", "fertility", "heart", "coimbra",
                                            "diabetes", "banknote", "qualitative_bankruptcy"};
    EXPECT_EQ(names, expected);
    EXPECT_THROW(find_schema(registry(), "iris"), DataError);
}

TEST(Registry, PreprocessingTable) {
    for (const auto& s : registry()) {
        const bool qb = s.name == "qualitative_bankruptcy";
        EXPECT_EQ(s.preprocessing.standardize, !qb) << s.name;
        EXPECT_EQ(s.preprocessing.ordinal_encode, qb) << s.name;
        EXPECT_EQ(s.preprocessing.smote, s.name == "fertility") << s.name;
    }
}

TEST(Loader, QualitativeBankruptcyOrdinalCodes) {
    const auto d = load_named("qualitative_bankruptcy");
    std::set<double> values(d.features.begin(), d.features.end());
    EXPECT_EQ(values, (std::set<double>{0.0, 1.0, 2.0}));
    const auto& s = find_schema(registry(), "qualitative_bankruptcy");
    for (const auto& c : s.columns) {
        std::set<double> codes;
        for (const auto& [level, code] : c.levels) codes.insert(code);
        EXPECT_EQ(codes.size(), c.levels.size());
        EXPECT_EQ(c.levels.at("N"), 0.0);
        EXPECT_EQ(c.levels.at("A"), 1.0);
        EXPECT_EQ(c.levels.at("P"), 2.0);
    }
}

TEST(Loader, ErrorsNameRowAndColumn) {
    TempDir tmp;
    const auto s = two_numeric_schema();
    auto message = [&](const std::string& text) {
        try {
            load_dataset(tmp.write("t.csv", text), s);
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message("a,b,y\n1,2,0\n1,2\n").find("row 3"), std::string::npos);
    const auto bad_num = message("a,b,y\n1,2,0\n1,x2,1\n");
    EXPECT_NE(bad_num.find("row 3"), std::string::npos);
    EXPECT_NE(bad_num.find("column b"), std::string::npos);
    const auto missing = message("a,b,y\n,2,0\n");
    EXPECT_NE(missing.find("column a"), std::string::npos);
    EXPECT_NE(message("a,b,y\n1,2,7\n").find("column y"), std::string::npos);
    EXPECT_NE(message("a,b,c,y\n1,2,3,0\n").find("header"), std::string::npos);
}

TEST(Loader, UnknownCategoricalLevel) {
    TempDir tmp;
    DatasetSchema s = two_numeric_schema();
    s.columns[1] = {"b", ColumnType::categorical, {{"lo", 0}, {"hi", 1}}};
    const auto d = load_dataset(tmp.write("ok.csv", "a,b,y\n1,lo,0\n2,hi,1\n"), s);
    EXPECT_EQ(d.row(1)[1], 1.0);
    try {
        load_dataset(tmp.write("bad.csv", "a,b,y\n1,lo,0\n2,mid,1\n"), s);
        FAIL() << "unknown level accepted";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3, column b"), std::string::npos) << e.what();
    }
}

TEST(Loader, HeaderlessUsesLastColumnAsTarget) {
    TempDir tmp;
    auto s = two_numeric_schema();
    s.has_header = false;
    const auto d = load_dataset(tmp.write("t.csv", "1.5,-2e3,1\r\n\n3,4,0\n"), s);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.row(0)[1], -2000.0);
    EXPECT_EQ(d.labels[0], 1);
    EXPECT_EQ(d.labels[1], 0);
}

TEST(Schema, RejectsNonInjectiveLevels) {
    TempDir tmp;
    const auto p = tmp.write("x.schema.json", R"({"name":"x","file":"x.csv",
      "columns":[{"name":"c","type":"categorical","levels":{"u":0,"v":0}}],
      "target":{"column":"y","mapping":{"0":0,"1":1}},
      "expected":{"samples":0,"class0":0,"class1":0}})");
    EXPECT_THROW(load_schema(p), DataError);
}

TEST(Loader, SingleLevelColumnIsConstantThenZeroed) {
    TempDir tmp;
    DatasetSchema s = two_numeric_schema();
    s.columns[0] = {"a", ColumnType::categorical, {{"only", 2}}};
    const auto d = load_dataset(tmp.write("t.csv", "a,b,y\nonly,1,0\nonly,2,1\nonly,5,1\n"), s);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.row(i)[0], 2.0);
    const auto st = standardize(d, {});
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(st.train.row(i)[0], 0.0);
}

// ---- standardization ----

TEST(Standardize, TrainColumnsHaveZeroMeanUnitStd) {
    const auto d = load_named("diabetes");
    const auto st = standardize(d, {});
    for (std::size_t j = 0; j < d.n_features; ++j) {
        double m = 0, v = 0;
        for (std::size_t i = 0; i < d.size(); ++i) m += st.train.row(i)[j];
        m /= static_cast<double>(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) v += std::pow(st.train.row(i)[j] - m, 2);
        EXPECT_LE(std::abs(m), 1e-10);
        EXPECT_LE(std::abs(std::sqrt(v / static_cast<double>(d.size())) - 1.0), 1e-10);
    }
}

TEST(Standardize, FitsOnTrainOnly) {
    const auto train = toy({{0, 10}, {2, 10}}, {0, 1});
    const auto test = toy({{4, 11}}, {1});
    const auto st = standardize(train, {test});
    EXPECT_EQ(st.scaler.mean, (std::vector<double>{1.0, 10.0}));
    EXPECT_EQ(st.scaler.std, (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(st.others[0].row(0)[0], 3.0);
    EXPECT_EQ(st.others[0].row(0)[1], 0.0);  // constant in train
}

TEST(Standardize, ApplyingTwiceIsNotIdentity) {
    const auto d = toy({{1, 5}, {3, 9}, {8, 1}}, {0, 1, 0});
    const auto s = fit_scaler(d);
    const auto once = s.apply(d);
    const auto twice = s.apply(once);
    EXPECT_NE(once.features, twice.features);
}

TEST(Standardize, ScalerRecordRoundTripsBitExactly) {
    TempDir tmp;
    const auto s = fit_scaler(load_named("coimbra"));
    s.save(tmp.path / "scaler.json");
    const auto r = Scaler::load(tmp.path / "scaler.json");
    ASSERT_EQ(r.mean.size(), s.mean.size());
    EXPECT_EQ(std::memcmp(r.mean.data(), s.mean.data(), s.mean.size() * sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(r.std.data(), s.std.data(), s.std.size() * sizeof(double)), 0);
    EXPECT_EQ(r.feature_names, s.feature_names);
    EXPECT_THROW(Scaler::from_json(R"({"format":"other","version":1})"), DataError);
}

// ---- SMOTE ----

TEST(Smote, FertilityBalancesTo88Each) {
    const auto d = load_named("fertility");
    std::mt19937_64 rng(7);
    const auto b = smote_balance(d, 5, rng);
    EXPECT_EQ(b.class_counts()[0], 88u);
    EXPECT_EQ(b.class_counts()[1], 88u);
    EXPECT_EQ(b.size(), 176u);
}

TEST(Smote, OriginalRowsPreserved) {
    const auto d = load_named("fertility");
    std::mt19937_64 rng(11);
    const auto b = smote_balance(d, 5, rng);
    // Multiset inclusion of (row, label) pairs, independent of position.
    std::multiset<std::pair<std::vector<double>, int>> balanced;
    for (std::size_t i = 0; i < b.size(); ++i) {
        balanced.emplace(std::vector<double>(b.row(i).begin(), b.row(i).end()), b.labels[i]);
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto it = balanced.find({std::vector<double>(d.row(i).begin(), d.row(i).end()), d.labels[i]});
        ASSERT_NE(it, balanced.end()) << "original row " << i << " missing";
        balanced.erase(it);
    }
    EXPECT_EQ(balanced.size(), 76u);
}

TEST(Smote, SyntheticRowsLieOnMinoritySegments) {
    const auto d = load_named("fertility");
    std::vector<std::size_t> minority;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.labels[i] == 1) minority.push_back(i);
    }
    std::mt19937_64 rng(3);
    const auto b = smote_balance(d, 5, rng);
    for (std::size_t s = d.size(); s < b.size(); ++s) {
        const auto z = b.row(s);
        EXPECT_EQ(b.labels[s], 1);
        bool found = false;
        for (std::size_t p = 0; p < minority.size() && !found; ++p) {
            for (std::size_t q = 0; q < minority.size() && !found; ++q) {
                if (p == q) continue;
                const auto a = d.row(minority[p]);
                const auto c = d.row(minority[q]);
                std::size_t j_max = 0;
                for (std::size_t j = 0; j < a.size(); ++j) {
                    if (std::abs(c[j] - a[j]) > std::abs(c[j_max] - a[j_max])) j_max = j;
                }
                if (c[j_max] == a[j_max]) continue;
                const double u = (z[j_max] - a[j_max]) / (c[j_max] - a[j_max]);
                if (u < 0.0 || u > 1.0) continue;
                bool on = true;
                for (std::size_t j = 0; j < a.size() && on; ++j) {
                    const double lo = std::min(a[j], c[j]) - 1e-12;
                    const double hi = std::max(a[j], c[j]) + 1e-12;
                    on = z[j] >= lo && z[j] <= hi && std::abs(a[j] + u * (c[j] - a[j]) - z[j]) <= 1e-9;
                }
                found = on;
            }
        }
        EXPECT_TRUE(found) << "synthetic row " << s << " is not between two minority rows";
    }
}

TEST(Smote, BalancedInputUnchanged) {
    const auto d = toy({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {0, 1, 0, 1});
    std::mt19937_64 rng(1);
    const auto b = smote_balance(d, 5, rng);
    EXPECT_EQ(b.features, d.features);
    EXPECT_EQ(b.labels, d.labels);
}

TEST(Smote, TooFewMinorityRows) {
    const auto d = toy({{0, 0}, {1, 1}, {2, 2}}, {0, 0, 1});
    std::mt19937_64 rng(1);
    EXPECT_THROW(smote_balance(d, 5, rng), DataError);
}

TEST(Smote, DeterministicUnderSeed) {
    const auto d = load_named("fertility");
    std::mt19937_64 r1(99), r2(99);
    EXPECT_EQ(smote_balance(d, 5, r1).features, smote_balance(d, 5, r2).features);
}

// ---- split ----

TEST(Split, HabermanStratified) {
    const auto d = load_named("haberman");
    const auto r = split(d, {0.2, true, 42});
    EXPECT_EQ(r.train.size() + r.test.size(), 306u);
    EXPECT_NEAR(static_cast<double>(r.test.size()), 61.0, 1.0);
    const auto c = r.test.class_counts();
    EXPECT_LE(std::abs(static_cast<double>(c[0]) - 0.2 * 225), 1.0);
    EXPECT_LE(std::abs(static_cast<double>(c[1]) - 0.2 * 81), 1.0);
    std::vector<std::size_t> all = r.train_indices;
    all.insert(all.end(), r.test_indices.begin(), r.test_indices.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(Split, SameSeedSamePartition) {
    const auto d = load_named("banknote");
    EXPECT_EQ(split(d, {0.2, true, 5}).test_indices, split(d, {0.2, true, 5}).test_indices);
    EXPECT_NE(split(d, {0.2, true, 5}).test_indices, split(d, {0.2, true, 6}).test_indices);
    EXPECT_EQ(split(d, {0.2, false, 5}).test_indices, split(d, {0.2, false, 5}).test_indices);
}

TEST(Split, RejectsEmptyClassSide) {
    const auto d = toy({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}}, {0, 0, 0, 0, 1, 1});
    EXPECT_THROW(split(d, {0.2, true, 1}), DataError);
    EXPECT_THROW(split(d, {0.0, true, 1}), DataError);
    EXPECT_THROW(split(d, {1.0, true, 1}), DataError);
}

// ---- pipeline ----

TEST(Pipeline, FertilityStageOrder) {
    PipelineOptions opt;
    opt.split.seed = 3;
    opt.smote_seed = 4;
    const auto p = prepare(find_schema(registry(), "fertility"), opt);
    ASSERT_EQ(p.trace.size(), 6u);
    EXPECT_EQ(p.trace[0], "checksum");
    EXPECT_EQ(p.trace[1], "load");
    EXPECT_EQ(p.trace[3], "smote 88/12 -> 88/88");
    EXPECT_EQ(p.trace[4].rfind("split", 0), 0u);
    EXPECT_EQ(p.trace[5], "standardize");
    EXPECT_EQ(std::count(p.trace.begin(), p.trace.end(), "standardize"), 1);
    EXPECT_EQ(p.train.size() + p.test.size(), 176u);
    ASSERT_TRUE(p.scaler.has_value());
    const auto again = p.scaler->apply(p.train);
    EXPECT_NE(again.features, p.train.features);
}

TEST(Pipeline, BankruptcySkipsStandardization) {
    const auto p = prepare(find_schema(registry(), "qualitative_bankruptcy"), {});
    EXPECT_FALSE(p.scaler.has_value());
    EXPECT_EQ(std::count(p.trace.begin(), p.trace.end(), "standardize"), 0);
    EXPECT_EQ(std::count(p.trace.begin(), p.trace.end(), "ordinal-encode"), 1);
    for (double v : p.train.features) EXPECT_TRUE(v == 0.0 || v == 1.0 || v == 2.0);
}

TEST(Pipeline, ChecksumMismatchIsFatal) {
    auto s = find_schema(registry(), "haberman");
    s.sha256 = std::string(64, '0');
    EXPECT_THROW(prepare(s, {}), DataError);
}
