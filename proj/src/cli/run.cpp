#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cryptwnn/ckks/errors.hpp"
#include "cryptwnn/cli/run.hpp"
#include "cryptwnn/data/pipeline.hpp"
#include "cryptwnn/ppwnn/io.hpp"
#include "cryptwnn/ppwnn/trainer.hpp"
#include "cryptwnn/wnn/checkpoint.hpp"

namespace cryptwnn::cli {
namespace fs = std::filesystem;

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

metrics::Metrics score(std::span<const int> labels, std::span<const double> scores) {
    std::vector<int> predicted;
    predicted.reserve(scores.size());
    for (double s : scores) predicted.push_back(wnn::threshold_label(s));
    return metrics::evaluate(labels, predicted, scores);
}

std::optional<wnn::Checkpoint> initial_state(const RunConfig& cfg, const wnn::WnnShape& shape) {
    if (cfg.init_params.empty()) return std::nullopt;
    auto c = stage("load", [&] { return wnn::load_checkpoint(cfg.init_params); });
    if (!(c.params.shape == shape)) {
        throw StageError("load", fmt::format("checkpoint shape {}x{} does not match the run's {}x{}", c.params.shape.nin,
                                             c.params.shape.nhn, shape.nin, shape.nhn));
    }
    if (!c.momentum) c.momentum = wnn::MomentumState{wnn::ParamGroups::zeros(shape)};
    return c;
}

struct Trained {
    wnn::TrainReport report;
    metrics::Metrics test;
    std::optional<std::size_t> depth;
};

Trained train_plain_run(const RunConfig& cfg, const data::PreparedData& prep, const wnn::WnnShape& shape,
                        const fs::path& dir) {
    ppwnn::TrainingLog log(dir / "training_log.csv");
    const auto init = initial_state(cfg, shape);
    auto res = stage("train", [&] {
        const wnn::BatchObserver observer = [&](const wnn::BatchEvent& e) { log.record(e); };
        if (init) return wnn::train_plain(prep.train, init->params, *init->momentum, cfg.train, cfg.activation, observer);
        return wnn::train_plain(prep.train, shape, cfg.train, cfg.activation, observer);
    });
    Trained out;
    out.test = stage("evaluate", [&] {
        const auto pred = wnn::predict_labels(res.params, prep.test, cfg.activation);
        return score(prep.test.labels, pred.scores);
    });
    wnn::save_checkpoint(dir / "params.json", {res.params, res.momentum});
    out.report = std::move(res.report);
    return out;
}

Trained train_encrypted_run(const RunConfig& cfg, const data::PreparedData& prep, const wnn::WnnShape& shape,
                            const fs::path& dir, const std::string& hash) {
    const auto ctx = stage("keygen", [&] {
        auto params = ckks::CkksParams::from_profile_name(cfg.profile);
        if (params.max_depth() < ppwnn::kTrainingDepth) {
            throw ckks::DepthError(fmt::format(
                "profile '{}' supports depth {}, encrypted training needs depth {}; use a longer modulus chain",
                cfg.profile, params.max_depth(), ppwnn::kTrainingDepth));
        }
        return ckks::CkksContext::create(params);
    });
    if (ctx->insecure()) spdlog::warn("CKKS profile '{}' is NOT secure; use it for testing only", cfg.profile);
    ppwnn::KeyCustodian custodian = stage("keygen", [&] { return ppwnn::KeyCustodian(ctx, cfg.key_seed); });
    const ppwnn::ComputeEngine engine(custodian.public_bundle());
    const ppwnn::RoleSplit roles{custodian, engine};

    ppwnn::StorageOptions storage;
    storage.memory_budget_bytes = cfg.memory_budget_mb << 20;
    storage.spill_parent = dir;
    ring::Prng rng(cfg.encrypt_seed);
    auto [enc_train, enc_test] = stage("encrypt", [&] {
        auto tr = ppwnn::encrypt_dataset(prep.train, custodian.public_bundle(), rng, storage);
        auto te = ppwnn::encrypt_dataset(prep.test, custodian.public_bundle(), rng, storage);
        return std::pair{std::move(tr), std::move(te)};
    });
    spdlog::info("encrypted {} training and {} test samples{}", enc_train.size(), enc_test.size(),
                 enc_train.spilled() ? " (spilled to disk)" : "");

    ppwnn::TrainingLog log(dir / "training_log.csv");
    const auto init = initial_state(cfg, shape);
    auto res = stage("train", [&] {
        const wnn::BatchObserver observer = [&](const wnn::BatchEvent& e) {
            log.record(e);
            spdlog::debug("epoch {} batch {} mse {:.6f}", e.epoch, e.batch, e.mse);
        };
        if (init) return ppwnn::train_encrypted(enc_train, init->params, *init->momentum, cfg.train, roles, observer);
        return ppwnn::train_encrypted(enc_train, shape, cfg.train, roles, observer);
    });
    Trained out;
    out.depth = res.max_depth_consumed;
    out.test = stage("evaluate", [&] {
        const auto eval = ppwnn::test_encrypted(res.params, enc_test, roles);
        return eval.metrics;
    });
    wnn::save_checkpoint(dir / "params.json", {res.clear_params, res.clear_momentum});
    if (cfg.save_encrypted_checkpoint) {
        ppwnn::save_encrypted_checkpoint(dir / "encrypted", *ctx, res.params, hash);
    }
    out.report = std::move(res.report);
    return out;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string group_title(const std::string& g) {
    if (g.empty()) return g;
    std::string t = g;
    t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    return t;
}

}  // namespace

data::DatasetSchema resolve_schema(const RunConfig& cfg) {
    const fs::path as_path(cfg.dataset);
    if (as_path.extension() == ".json" && fs::exists(as_path)) return data::load_schema(as_path);
    const auto dir = cfg.dataset_dir.empty() ? data::default_dataset_dir() : cfg.dataset_dir;
    const auto registry = data::load_registry(dir);
    return data::find_schema(registry, cfg.dataset);
}

RunReport run_train(const RunConfig& cfg) {
    stage("config", [&] { cfg.validate(); });
    RunReport r;
    r.config = cfg;
    r.config_hash = config_hash(cfg);
    const auto schema = stage("load", [&] { return resolve_schema(cfg); });
    data::PipelineOptions opts;
    opts.split = {cfg.test_fraction, true, cfg.split_seed};
    opts.smote_seed = cfg.smote_seed;
    const auto prep = stage("preprocess", [&] { return data::prepare(schema, opts); });
    for (const auto& step : prep.trace) spdlog::info("[{}] {}", schema.name, step);
    if (schema.surrogate) spdlog::warn("[{}] synthetic stand-in data; accuracies are not comparable with published ones",
                                       schema.name);

    r.dataset = schema.name;
    r.display_name = schema.display_name;
    r.group = schema.group;
    r.surrogate = schema.surrogate;
    r.pipeline = prep.trace;
    r.train_samples = prep.train.size();
    r.test_samples = prep.test.size();
    r.shape = {prep.train.n_features, cfg.hidden.value_or(prep.train.n_features)};

    const fs::path dir = resolve_output_dir(cfg) / schema.name / std::string(to_string(cfg.mode));
    fs::create_directories(dir);
    r.artifacts = dir;
    if (prep.scaler) prep.scaler->save(dir / "scaler.json");

    spdlog::info("[{}] {} training, {} activation, shape {}x{}x1, {} train / {} test", schema.name,
                 to_string(cfg.mode), wnn::to_string(cfg.activation), r.shape.nin, r.shape.nhn, r.train_samples,
                 r.test_samples);
    Trained t = cfg.mode == RunMode::plain ? train_plain_run(cfg, prep, r.shape, dir)
                                           : train_encrypted_run(cfg, prep, r.shape, dir, r.config_hash);
    r.train = std::move(t.report);
    r.test = t.test;
    r.train.test_metrics = t.test;
    r.depth_consumed = t.depth;
    spdlog::info("[{}] {} after {} epochs: test accuracy {:.4f}, AUC {:.4f}, {:.4g} s/epoch", schema.name,
                 r.train.status, r.train.epochs_run, r.test.accuracy, r.test.auc, r.train.mean_epoch_seconds());
    write_text(dir / "report.json", report_to_json(r));
    return r;
}

double CompareRow::accuracy_gap() const noexcept { return std::abs(encrypted_accuracy - plain_accuracy); }
double CompareRow::auc_gap() const noexcept { return std::abs(encrypted_auc - plain_auc); }
bool CompareRow::flagged() const noexcept { return accuracy_gap() > kGapFlag; }

CompareResult run_compare(const RunConfig& base, const std::vector<std::string>& datasets,
                          wnn::Activation baseline) {
    CompareResult out;
    for (const auto& name : datasets) {
        RunConfig plain = base;
        plain.dataset = name;
        plain.mode = RunMode::plain;
        plain.activation = baseline;
        auto pr = run_train(plain);

        RunConfig enc = base;
        enc.dataset = name;
        enc.mode = RunMode::encrypted;
        enc.activation = wnn::Activation::poly;
        enc.train.target_accuracy = pr.train.best_train_accuracy;
        auto er = run_train(enc);

        CompareRow row;
        row.dataset = pr.dataset;
        row.display_name = pr.display_name;
        row.group = pr.group;
        row.surrogate = pr.surrogate;
        row.plain_accuracy = pr.test.accuracy;
        row.plain_auc = pr.test.auc;
        row.encrypted_accuracy = er.test.accuracy;
        row.encrypted_auc = er.test.auc;
        row.plain_epoch_seconds = pr.train.mean_epoch_seconds();
        row.encrypted_epoch_seconds = er.train.mean_epoch_seconds();
        out.rows.push_back(row);
        out.plain.push_back(std::move(pr));
        out.encrypted.push_back(std::move(er));
    }
    const auto dir = resolve_output_dir(base);
    fs::create_directories(dir);
    write_text(dir / "comparison.txt", format_compare_table(out.rows));
    write_text(dir / "comparison.csv", format_compare_csv(out.rows));
    return out;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
    std::vector<std::string> groups;
    for (const auto& r : rows) {
        if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
    }
    std::size_t name_w = 7;
    for (const auto& r : rows) name_w = std::max(name_w, r.display_name.size() + (r.surrogate ? 1 : 0));
    std::ostringstream os;
    const std::string header = fmt::format("{}  {:>9}  {:>9}  {:>9}  {:>9}  {:>12}  {:>7}", pad("Dataset", name_w),
                                           "Plain Acc", "Plain AUC", "Enc Acc", "Enc AUC", "Enc s/epoch", "|dAcc|");
    bool any_surrogate = false;
    for (const auto& g : groups) {
        os << group_title(g) << '\n' << header << '\n' << std::string(header.size(), '-') << '\n';
        for (const auto& r : rows) {
            if (r.group != g) continue;
            any_surrogate = any_surrogate || r.surrogate;
            os << fmt::format("{}  {:>9.4f}  {:>9.4f}  {:>9.4f}  {:>9.4f}  {:>12.2f}  {:>7.4f}{}\n",
                              pad(r.display_name + (r.surrogate ? "*" : ""), name_w), r.plain_accuracy, r.plain_auc,
                              r.encrypted_accuracy, r.encrypted_auc, r.encrypted_epoch_seconds, r.accuracy_gap(),
                              r.flagged() ? "  GAP > 0.1" : "");
        }
        os << '\n';
    }
    if (any_surrogate) os << "* synthetic stand-in data\n";
    return os.str();
}

std::string format_compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "group,dataset,display_name,surrogate,plain_accuracy,plain_auc,encrypted_accuracy,encrypted_auc,"
          "plain_epoch_seconds,encrypted_epoch_seconds,accuracy_gap,auc_gap,flagged\n";
    for (const auto& r : rows) {
        os << fmt::format("{},{},\"{}\",{},{:.17g},{:.17g},{:.17g},{:.17g},{:.6f},{:.6f},{:.17g},{:.17g},{}\n", r.group,
                          r.dataset, r.display_name, r.surrogate ? 1 : 0, r.plain_accuracy, r.plain_auc,
                          r.encrypted_accuracy, r.encrypted_auc, r.plain_epoch_seconds, r.encrypted_epoch_seconds,
                          r.accuracy_gap(), r.auc_gap(), r.flagged() ? 1 : 0);
    }
    return os.str();
}

}  // namespace cryptwnn::cli
