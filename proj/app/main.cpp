// cryptwnn: plaintext and CKKS-encrypted wavelet neural network training.

#include <cmath>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cryptwnn/ckks/context.hpp"
#include "cryptwnn/cli/run.hpp"
#include "cryptwnn/data/schema.hpp"
#include "cryptwnn/ppwnn/roles.hpp"

namespace {

using namespace cryptwnn;

struct Flags {
    cli::RunConfig cfg;
    std::string mode = "plain";
    std::string activation;
    std::string stop_rule = "literal";
    std::optional<double> target_accuracy;
    std::string log_level = "info";
};

void add_run_flags(CLI::App& app, Flags& f) {
    auto& c = f.cfg;
    auto& t = c.train;
    app.add_option("--dataset-dir", c.dataset_dir, "Directory of *.schema.json files");
    app.add_option("--activation", f.activation, "exact or poly (plain runs; encrypted runs require poly)");
    app.add_option("--profile", c.profile, "CKKS profile: secure, test-insecure or unit")->capture_default_str();
    app.add_option("--eta", t.eta, "Learning rate")->capture_default_str();
    app.add_option("--alpha", t.alpha, "Momentum")->capture_default_str();
    app.add_option("--batch-size", t.batch_size, "Mini-batch size")->capture_default_str();
    app.add_option("--epsilon", t.epsilon, "Stop when the batch loss changes by less than this")->capture_default_str();
    app.add_option("--max-epochs", t.max_epochs, "Hard epoch limit")->capture_default_str();
    app.add_option("--target-accuracy", f.target_accuracy, "Accuracy the encrypted run must exceed before stopping");
    app.add_option("--stop-rule", f.stop_rule, "literal (continue while either test holds) or any")
        ->capture_default_str();
    app.add_option("--max-step", t.max_step, "Elementwise cap on each update delta, 0 disables")->capture_default_str();
    app.add_option("--seed", t.seed, "Initialisation and shuffle seed")->capture_default_str();
    app.add_option("--hidden", c.hidden, "Hidden nodes (default: number of inputs)");
    app.add_option("--init-params", c.init_params, "Start from a params.json checkpoint");
    app.add_option("--test-fraction", c.test_fraction, "Held-out fraction")->capture_default_str();
    app.add_option("--split-seed", c.split_seed, "Train/test split seed")->capture_default_str();
    app.add_option("--smote-seed", c.smote_seed, "Oversampling seed")->capture_default_str();
    app.add_option("--key-seed", c.key_seed, "Key generation seed")->capture_default_str();
    app.add_option("--encrypt-seed", c.encrypt_seed, "Encryption randomness seed")->capture_default_str();
    app.add_option("--memory-budget-mb", c.memory_budget_mb, "Encrypted samples kept in memory before spilling")
        ->capture_default_str();
    app.add_flag("!--no-encrypted-checkpoint", c.save_encrypted_checkpoint, "Skip writing encrypted parameters");
    app.add_option("-o,--output-dir", c.output_dir,
                   fmt::format("Output directory (overridden by ${})", cli::kOutputDirEnv))
        ->capture_default_str();
    app.add_option("--log-level", f.log_level, "trace, debug, info, warn or error")->capture_default_str();
}

cli::RunConfig finish(Flags& f) {
    auto c = f.cfg;
    c.mode = cli::run_mode_from_string(f.mode);
    if (f.activation.empty()) {
        c.activation = c.mode == cli::RunMode::encrypted ? wnn::Activation::poly : wnn::Activation::exact;
    } else {
        c.activation = wnn::activation_from_string(f.activation);
    }
    c.train.target_accuracy = f.target_accuracy;
    c.train.stop_rule = wnn::stop_rule_from_string(f.stop_rule);
    return c;
}

int list_datasets(const std::filesystem::path& dir_arg, bool verify) {
    const auto dir = dir_arg.empty() ? data::default_dataset_dir() : dir_arg;
    const auto registry = data::load_registry(dir);
    std::cout << fmt::format("{:<24} {:<8} {:>7} {:>11}  {:<9}  {}\n", "name", "group", "samples", "class 0/1",
                             "checksum", "sha256");
    int bad = 0;
    for (const auto& s : registry) {
        std::string status = "-";
        if (verify) {
            const bool ok = data::file_sha256(s.csv_path()) == s.sha256;
            status = ok ? "ok" : "MISMATCH";
            bad += ok ? 0 : 1;
        }
        std::cout << fmt::format("{:<24} {:<8} {:>7} {:>11}  {:<9}  {}{}\n", s.name, s.group, s.expected_samples,
                                 fmt::format("{}/{}", s.expected_class0, s.expected_class1), status, s.sha256,
                                 s.surrogate ? "  (synthetic stand-in)" : "");
    }
    return bad == 0 ? 0 : 1;
}

int print_params(const std::string& profile) {
    const auto p = ckks::CkksParams::from_profile_name(profile);
    std::string bits;
    for (int b : p.coeff_modulus_bits) bits += (bits.empty() ? "" : ", ") + std::to_string(b);
    const auto secure_max = ckks::max_secure_modulus_bits(p.poly_degree);
    std::cout << fmt::format("profile            {}\n", profile)
              << fmt::format("poly degree N      {}\n", p.poly_degree)
              << fmt::format("modulus bits       [{}] (last = key-switching prime)\n", bits)
              << fmt::format("total modulus bits {}{}\n", p.total_modulus_bits(),
                             secure_max ? fmt::format(" (128-bit limit {})", *secure_max) : "")
              << fmt::format("scale              2^{}\n", std::log2(p.scale))
              << fmt::format("chain length       {}\n", p.chain_length())
              << fmt::format("max depth          {}\n", p.max_depth())
              << fmt::format("security           {}\n", p.profile == ckks::SecurityProfile::secure
                                                             ? "128-bit (RLWE table)"
                                                             : "NOT SECURE, testing only")
              << fmt::format("forward depth      {} ({})\n", ppwnn::kForwardDepth,
                             p.max_depth() >= ppwnn::kForwardDepth ? "fits" : "does not fit")
              << fmt::format("training depth     {} ({})\n", ppwnn::kTrainingDepth,
                             p.max_depth() >= ppwnn::kTrainingDepth ? "fits" : "does not fit");
    return 0;
}

void set_log_level(const std::string& level) {
    spdlog::set_level(spdlog::level::from_str(level));
    spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet neural network training on plaintext and CKKS-encrypted data"};
    app.require_subcommand(1);

    Flags train_flags;
    auto* train = app.add_subcommand("train", "Train one model and evaluate it on the held-out split");
    train->add_option("dataset", train_flags.cfg.dataset, "Registry name or path to a schema file")->required();
    train->add_option("--mode", train_flags.mode, "plain or encrypted")->capture_default_str();
    add_run_flags(*train, train_flags);

    Flags cmp_flags;
    std::vector<std::string> cmp_datasets;
    std::string baseline = "exact";
    auto* compare = app.add_subcommand("compare", "Plaintext baseline versus encrypted twin, per dataset");
    compare->add_option("datasets", cmp_datasets, "Registry names (default: all)");
    compare->add_option("--baseline-activation", baseline, "Activation of the plaintext baseline")
        ->capture_default_str();
    add_run_flags(*compare, cmp_flags);

    std::filesystem::path ds_dir;
    bool verify = false;
    auto* datasets = app.add_subcommand("datasets", "List bundled datasets and checksums");
    datasets->add_option("--dataset-dir", ds_dir, "Directory of *.schema.json files");
    datasets->add_flag("--verify", verify, "Recompute file checksums");

    std::string profile = "test-insecure";
    auto* params = app.add_subcommand("params", "Print a CKKS profile and the depth budget");
    params->add_option("--profile", profile, "secure, test-insecure or unit")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            set_log_level(train_flags.log_level);
            const auto cfg = finish(train_flags);
            const auto r = cli::run_train(cfg);
            std::cout << fmt::format("{} {}: accuracy {:.4f}  AUC {:.4f}  {:.4g} s/epoch  ({})\n", r.dataset,
                                     cli::to_string(cfg.mode), r.test.accuracy, r.test.auc,
                                     r.train.mean_epoch_seconds(), r.artifacts.string());
        } else if (compare->parsed()) {
            set_log_level(cmp_flags.log_level);
            cmp_flags.mode = "encrypted";
            auto cfg = finish(cmp_flags);
            if (cmp_datasets.empty()) {
                const auto dir = cfg.dataset_dir.empty() ? data::default_dataset_dir() : cfg.dataset_dir;
                for (const auto& s : data::load_registry(dir)) cmp_datasets.push_back(s.name);
            }
            cfg.dataset = cmp_datasets.front();
            const auto res = cli::run_compare(cfg, cmp_datasets, wnn::activation_from_string(baseline));
            std::cout << cli::format_compare_table(res.rows);
        } else if (datasets->parsed()) {
            return list_datasets(ds_dir, verify);
        } else if (params->parsed()) {
            return print_params(profile);
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
