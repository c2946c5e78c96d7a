#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cryptwnn/cli/run.hpp"

namespace {

using namespace cryptwnn;
using cli::RunConfig;

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("cryptwnn_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(RunConfig, JsonRoundTripAndHash) {
    RunConfig c;
    c.dataset = "haberman";
    c.train.epsilon = std::numeric_limits<double>::infinity();
    c.train.target_accuracy = 0.75;
    c.hidden = 5;
    const auto back = cli::config_from_json(cli::config_to_json(c));
    EXPECT_EQ(cli::config_to_json(back), cli::config_to_json(c));
    EXPECT_TRUE(std::isinf(back.train.epsilon));
    EXPECT_EQ(cli::config_hash(back), cli::config_hash(c));

    auto moved = c;
    moved.output_dir = "/elsewhere";
    EXPECT_EQ(cli::config_hash(moved), cli::config_hash(c));
    auto changed = c;
    changed.train.eta = 0.05;
    EXPECT_NE(cli::config_hash(changed), cli::config_hash(c));
    EXPECT_EQ(cli::config_hash(c).size(), 64u);
}

TEST(RunConfig, DefaultsCapSteps) {
    EXPECT_DOUBLE_EQ(RunConfig{}.train.max_step, 0.1);
    EXPECT_EQ(RunConfig{}.profile, "test-insecure");
}

TEST(RunConfig, EncryptedExactIsRejectedBeforeAnyWork) {
    RunConfig c;
    c.dataset = "haberman";
    c.mode = cli::RunMode::encrypted;
    c.activation = wnn::Activation::exact;
    c.output_dir = scratch("reject");
    try {
        static_cast<void>(cli::run_train(c));
        FAIL() << "expected rejection";
    } catch (const cli::StageError& e) {
        EXPECT_EQ(e.stage(), "config");
        EXPECT_NE(std::string(e.what()).find("polynomial"), std::string::npos);
    }
    EXPECT_FALSE(std::filesystem::exists(c.output_dir));
}

TEST(RunConfig, UnknownDatasetFailsInLoadStage) {
    RunConfig c;
    c.dataset = "no_such_dataset";
    c.output_dir = scratch("unknown");
    try {
        static_cast<void>(cli::run_train(c));
        FAIL() << "expected failure";
    } catch (const cli::StageError& e) {
        EXPECT_EQ(e.stage(), "load");
    }
}

TEST(RunConfig, ShortChainFailsInKeygenStage) {
    RunConfig c;
    c.dataset = "haberman";
    c.mode = cli::RunMode::encrypted;
    c.activation = wnn::Activation::poly;
    c.profile = "unit";
    c.output_dir = scratch("short");
    try {
        static_cast<void>(cli::run_train(c));
        FAIL() << "expected failure";
    } catch (const cli::StageError& e) {
        EXPECT_EQ(e.stage(), "keygen");
        EXPECT_NE(std::string(e.what()).find("depth 10"), std::string::npos) << e.what();
    }
    std::filesystem::remove_all(c.output_dir);
}

TEST(RunConfig, OutputDirectoryEnvironmentOverride) {
    RunConfig c;
    c.output_dir = "from-flag";
    ::unsetenv(cli::kOutputDirEnv);
    EXPECT_EQ(cli::resolve_output_dir(c), "from-flag");
    ::setenv(cli::kOutputDirEnv, "/tmp/from-env", 1);
    EXPECT_EQ(cli::resolve_output_dir(c), "/tmp/from-env");
    ::unsetenv(cli::kOutputDirEnv);
}

TEST(RunTrain, PlainBankNoteReportAndArtifacts) {
    RunConfig c;
    c.dataset = "banknote";
    c.output_dir = scratch("plain");
    const auto r = cli::run_train(c);
    EXPECT_EQ(r.dataset, "banknote");
    EXPECT_EQ(r.train_samples + r.test_samples, 1372u);
    EXPECT_GT(r.test.accuracy, 0.5);
    EXPECT_GT(r.test.auc, 0.5);
    ASSERT_FALSE(r.train.epoch_seconds.empty());
    EXPECT_GT(r.train.mean_epoch_seconds(), 0.0);
    EXPECT_EQ(r.config_hash, cli::config_hash(c));
    EXPECT_FALSE(r.depth_consumed);

    const auto dir = c.output_dir / "banknote" / "plain";
    for (const char* f : {"report.json", "params.json", "training_log.csv", "scaler.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    const std::string text = slurp(dir / "report.json");
    const auto back = cli::report_from_json(text);
    EXPECT_EQ(cli::report_to_json(back), cli::report_to_json(r));
    EXPECT_EQ(back.train.loss_trace, r.train.loss_trace);
    EXPECT_EQ(back.test.auc, r.test.auc);

    // Training log has one line per batch.
    std::ifstream log(dir / "training_log.csv");
    std::size_t lines = 0;
    for (std::string line; std::getline(log, line);) ++lines;
    EXPECT_EQ(lines, r.train.batches_run + 1);
    std::filesystem::remove_all(c.output_dir);
}

TEST(RunTrain, PlainRunResumesFromCheckpoint) {
    RunConfig c;
    c.dataset = "haberman";
    c.train.max_epochs = 1;
    c.output_dir = scratch("resume");
    const auto first = cli::run_train(c);
    auto next = c;
    next.init_params = first.artifacts / "params.json";
    next.output_dir = c.output_dir / "second";
    const auto second = cli::run_train(next);
    ASSERT_FALSE(second.train.loss_trace.empty());
    EXPECT_NE(second.train.loss_trace.front(), first.train.loss_trace.front());

    auto wrong = c;
    wrong.dataset = "banknote";
    wrong.init_params = next.init_params;
    try {
        static_cast<void>(cli::run_train(wrong));
        FAIL() << "expected shape mismatch";
    } catch (const cli::StageError& e) {
        EXPECT_EQ(e.stage(), "load");
    }
    std::filesystem::remove_all(c.output_dir);
}

TEST(RunTrain, IdenticalConfigGivesIdenticalResults) {
    RunConfig c;
    c.dataset = "coimbra";
    c.train.max_epochs = 5;
    c.output_dir = scratch("det");
    const auto a = cli::run_train(c);
    const auto b = cli::run_train(c);
    EXPECT_EQ(a.train.loss_trace, b.train.loss_trace);
    EXPECT_EQ(a.train.epoch_accuracy, b.train.epoch_accuracy);
    EXPECT_EQ(a.test.accuracy, b.test.accuracy);
    EXPECT_EQ(a.test.auc, b.test.auc);
    EXPECT_EQ(a.pipeline, b.pipeline);
    std::filesystem::remove_all(c.output_dir);
}

TEST(RunTrain, EncryptedFertilityLogsBalanceStep) {
    RunConfig c;
    c.dataset = "fertility";
    c.mode = cli::RunMode::encrypted;
    c.activation = wnn::Activation::poly;
    c.hidden = 1;
    c.train.max_epochs = 1;
    c.train.batch_size = 64;
    c.output_dir = scratch("enc");
    const auto r = cli::run_train(c);
    EXPECT_NE(std::find(r.pipeline.begin(), r.pipeline.end(), "smote 88/12 -> 88/88"), r.pipeline.end());
    EXPECT_EQ(r.train_samples + r.test_samples, 176u);
    EXPECT_EQ(r.train.epochs_run, 1u);
    ASSERT_TRUE(r.depth_consumed);
    EXPECT_LE(*r.depth_consumed, 10u);
    const auto dir = c.output_dir / "fertility" / "encrypted";
    EXPECT_TRUE(std::filesystem::exists(dir / "encrypted" / "manifest.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
    std::filesystem::remove_all(c.output_dir);
}

cli::CompareRow row(const std::string& name, const std::string& group, double pa, double ea) {
    cli::CompareRow r;
    r.dataset = name;
    r.display_name = name;
    r.group = group;
    r.plain_accuracy = pa;
    r.plain_auc = 0.6;
    r.encrypted_accuracy = ea;
    r.encrypted_auc = 0.55;
    r.encrypted_epoch_seconds = 83.0;
    return r;
}

TEST(CompareTable, GroupsRowsAndFlagsLargeGaps) {
    std::vector<cli::CompareRow> rows{row("A", "health", 0.48, 0.54), row("B", "health", 0.75, 0.54),
                                      row("C", "finance", 0.58, 0.54)};
    rows[2].surrogate = true;
    EXPECT_FALSE(rows[0].flagged());
    EXPECT_TRUE(rows[1].flagged());
    EXPECT_NEAR(rows[1].accuracy_gap(), 0.21, 1e-12);
    const auto text = cli::format_compare_table(rows);
    const auto health = text.find("Health");
    const auto finance = text.find("Finance");
    ASSERT_NE(health, std::string::npos);
    ASSERT_NE(finance, std::string::npos);
    EXPECT_LT(health, text.find("A "));
    EXPECT_LT(text.find("B "), finance);
    EXPECT_NE(text.find("GAP > 0.1"), std::string::npos);
    EXPECT_NE(text.find("C*"), std::string::npos);

    const auto csv = cli::format_compare_csv(rows);
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header.substr(0, 13), "group,dataset");
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    EXPECT_EQ(n, 3u);
}

}  // namespace
