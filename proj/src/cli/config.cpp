#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "cryptwnn/ckks/params.hpp"
#include "cryptwnn/cli/run.hpp"

namespace cryptwnn::cli {
using nlohmann::json;

namespace {

constexpr const char* kReportFormat = "cryptwnn-run-report";
constexpr int kReportVersion = 1;

// JSON has no infinities or NaN; encode them as strings so reports round-trip.
json real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double real_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("not a number: " + s);
}

json reals(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(real(x));
    return a;
}

std::vector<double> reals_from(const json& j) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(real_from(x));
    return out;
}

json train_to_json(const wnn::TrainConfig& t) {
    return {
        {"eta", real(t.eta)},
        {"alpha", real(t.alpha)},
        {"batch_size", t.batch_size},
        {"epsilon", real(t.epsilon)},
        {"max_epochs", t.max_epochs},
        {"target_accuracy", t.target_accuracy ? real(*t.target_accuracy) : json(nullptr)},
        {"seed", t.seed},
        {"max_step", real(t.max_step)},
        {"stop_rule", std::string(wnn::to_string(t.stop_rule))},
    };
}

wnn::TrainConfig train_from_json(const json& j) {
    wnn::TrainConfig t;
    t.eta = real_from(j.at("eta"));
    t.alpha = real_from(j.at("alpha"));
    t.batch_size = j.at("batch_size").get<std::size_t>();
    t.epsilon = real_from(j.at("epsilon"));
    t.max_epochs = j.at("max_epochs").get<std::size_t>();
    if (!j.at("target_accuracy").is_null()) t.target_accuracy = real_from(j.at("target_accuracy"));
    t.seed = j.at("seed").get<std::uint64_t>();
    t.max_step = real_from(j.at("max_step"));
    t.stop_rule = wnn::stop_rule_from_string(j.at("stop_rule").get<std::string>());
    return t;
}

json config_json(const RunConfig& c, bool with_output) {
    json j = {
        {"dataset", c.dataset},
        {"dataset_dir", c.dataset_dir.string()},
        {"mode", std::string(to_string(c.mode))},
        {"activation", std::string(wnn::to_string(c.activation))},
        {"profile", c.profile},
        {"train", train_to_json(c.train)},
        {"hidden", c.hidden ? json(*c.hidden) : json(nullptr)},
        {"init_params", c.init_params.string()},
        {"test_fraction", real(c.test_fraction)},
        {"split_seed", c.split_seed},
        {"smote_seed", c.smote_seed},
        {"key_seed", c.key_seed},
        {"encrypt_seed", c.encrypt_seed},
        {"memory_budget_mb", c.memory_budget_mb},
        {"save_encrypted_checkpoint", c.save_encrypted_checkpoint},
    };
    if (with_output) j["output_dir"] = c.output_dir.string();
    return j;
}

RunConfig config_from(const json& j) {
    RunConfig c;
    c.dataset = j.at("dataset").get<std::string>();
    c.dataset_dir = j.at("dataset_dir").get<std::string>();
    c.mode = run_mode_from_string(j.at("mode").get<std::string>());
    c.activation = wnn::activation_from_string(j.at("activation").get<std::string>());
    c.profile = j.at("profile").get<std::string>();
    c.train = train_from_json(j.at("train"));
    if (!j.at("hidden").is_null()) c.hidden = j.at("hidden").get<std::size_t>();
    c.init_params = j.at("init_params").get<std::string>();
    c.test_fraction = real_from(j.at("test_fraction"));
    c.split_seed = j.at("split_seed").get<std::uint64_t>();
    c.smote_seed = j.at("smote_seed").get<std::uint64_t>();
    c.key_seed = j.at("key_seed").get<std::uint64_t>();
    c.encrypt_seed = j.at("encrypt_seed").get<std::uint64_t>();
    c.memory_budget_mb = j.at("memory_budget_mb").get<std::size_t>();
    c.save_encrypted_checkpoint = j.at("save_encrypted_checkpoint").get<bool>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    return c;
}

json metrics_json(const metrics::Metrics& m) {
    return {
        {"accuracy", real(m.accuracy)},
        {"auc", real(m.auc)},
        {"n", m.n},
        {"confusion", {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn}, {"fn", m.confusion.fn}}},
    };
}

metrics::Metrics metrics_from(const json& j) {
    metrics::Metrics m;
    m.accuracy = real_from(j.at("accuracy"));
    m.auc = real_from(j.at("auc"));
    m.n = j.at("n").get<std::size_t>();
    const auto& c = j.at("confusion");
    m.confusion = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
                   c.at("fn").get<std::size_t>()};
    return m;
}

}  // namespace

std::string_view to_string(RunMode m) noexcept { return m == RunMode::plain ? "plain" : "encrypted"; }

RunMode run_mode_from_string(std::string_view s) {
    if (s == "plain") return RunMode::plain;
    if (s == "encrypted") return RunMode::encrypted;
    throw ConfigError(fmt::format("unknown mode '{}' (expected plain or encrypted)", s));
}

wnn::TrainConfig RunConfig::default_train_config() {
    wnn::TrainConfig t;
    t.max_step = 0.1;
    return t;
}

void RunConfig::validate() const {
    if (dataset.empty()) throw ConfigError("no dataset given");
    if (mode == RunMode::encrypted && activation != wnn::Activation::poly) {
        throw ConfigError("encrypted training evaluates only the polynomial activation; use --activation poly");
    }
    try {
        train.validate();
        static_cast<void>(ckks::CkksParams::from_profile_name(profile));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError(fmt::format("test fraction must lie in (0, 1), got {}", test_fraction));
    }
    if (hidden && *hidden == 0) throw ConfigError("hidden layer needs at least one node");
}

std::string config_to_json(const RunConfig& c) { return config_json(c, true).dump(2); }

RunConfig config_from_json(const std::string& text) { return config_from(json::parse(text)); }

std::string config_hash(const RunConfig& c) {
    const std::string canonical = config_json(c, false).dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

std::filesystem::path resolve_output_dir(const RunConfig& c) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return c.output_dir;
}

std::string report_to_json(const RunReport& r) {
    const auto& t = r.train;
    json j = {
        {"format", kReportFormat},
        {"version", kReportVersion},
        {"config", config_json(r.config, true)},
        {"config_hash", r.config_hash},
        {"seeds",
         {{"init_and_shuffle", r.config.train.seed},
          {"split", r.config.split_seed},
          {"smote", r.config.smote_seed},
          {"keys", r.config.key_seed},
          {"encryption", r.config.encrypt_seed}}},
        {"dataset",
         {{"name", r.dataset},
          {"display_name", r.display_name},
          {"group", r.group},
          {"surrogate", r.surrogate},
          {"pipeline", r.pipeline},
          {"train_samples", r.train_samples},
          {"test_samples", r.test_samples}}},
        {"shape", {{"nin", r.shape.nin}, {"nhn", r.shape.nhn}, {"nout", wnn::WnnShape::nout}}},
        {"train",
         {{"status", t.status},
          {"epochs_run", t.epochs_run},
          {"batches_run", t.batches_run},
          {"loss_trace", reals(t.loss_trace)},
          {"epoch_seconds", reals(t.epoch_seconds)},
          {"mean_epoch_seconds", real(t.mean_epoch_seconds())},
          {"epoch_accuracy", reals(t.epoch_accuracy)},
          {"best_train_accuracy", real(t.best_train_accuracy)}}},
        {"test", metrics_json(r.test)},
        {"depth_consumed", r.depth_consumed ? json(*r.depth_consumed) : json(nullptr)},
        {"artifacts", r.artifacts.string()},
    };
    return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format") != kReportFormat || j.at("version") != kReportVersion) {
        throw ConfigError("not a run report");
    }
    RunReport r;
    r.config = config_from(j.at("config"));
    r.config_hash = j.at("config_hash").get<std::string>();
    const auto& d = j.at("dataset");
    r.dataset = d.at("name").get<std::string>();
    r.display_name = d.at("display_name").get<std::string>();
    r.group = d.at("group").get<std::string>();
    r.surrogate = d.at("surrogate").get<bool>();
    r.pipeline = d.at("pipeline").get<std::vector<std::string>>();
    r.train_samples = d.at("train_samples").get<std::size_t>();
    r.test_samples = d.at("test_samples").get<std::size_t>();
    r.shape.nin = j.at("shape").at("nin").get<std::size_t>();
    r.shape.nhn = j.at("shape").at("nhn").get<std::size_t>();
    const auto& t = j.at("train");
    r.train.status = t.at("status").get<std::string>();
    r.train.epochs_run = t.at("epochs_run").get<std::size_t>();
    r.train.batches_run = t.at("batches_run").get<std::size_t>();
    r.train.loss_trace = reals_from(t.at("loss_trace"));
    r.train.epoch_seconds = reals_from(t.at("epoch_seconds"));
    r.train.epoch_accuracy = reals_from(t.at("epoch_accuracy"));
    r.train.best_train_accuracy = real_from(t.at("best_train_accuracy"));
    r.test = metrics_from(j.at("test"));
    r.train.test_metrics = r.test;
    if (!j.at("depth_consumed").is_null()) r.depth_consumed = j.at("depth_consumed").get<std::size_t>();
    r.artifacts = j.at("artifacts").get<std::string>();
    return r;
}

}  // namespace cryptwnn::cli
