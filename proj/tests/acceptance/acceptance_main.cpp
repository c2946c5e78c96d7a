// Acceptance suite: one PASS/FAIL line per criterion. Run all, or one with --only N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cryptwnn/ckks/encoder.hpp"
#include "cryptwnn/ckks/encryptor.hpp"
#include "cryptwnn/ckks/errors.hpp"
#include "cryptwnn/ckks/evaluator.hpp"
#include "cryptwnn/cli/run.hpp"
#include "cryptwnn/data/loader.hpp"
#include "cryptwnn/data/pipeline.hpp"
#include "cryptwnn/metrics/metrics.hpp"
#include "cryptwnn/ppwnn/trainer.hpp"
#include "cryptwnn/ring/ring.hpp"
#include "cryptwnn/wnn/model.hpp"

namespace {

using namespace cryptwnn;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Options {
    fs::path output_dir = fs::temp_directory_path() / "cryptwnn_acceptance";
    std::size_t parity_epochs = 1;
    std::size_t shadow_epochs = 5;
};

// 1. CKKS correctness at the test profile.
Outcome ckks_correctness(const Options&) {
    using namespace ckks;
    const auto ctx = CkksContext::create(CkksParams::test_insecure_default());
    ring::Prng rng(101);
    const auto keys = keygen(ctx, rng);
    const Encoder encoder(ctx);
    const Encryptor encryptor(ctx, keys.pub);
    const Decryptor decryptor(ctx, keys.secret);
    const Evaluator eval(ctx, keys.relin);
    auto enc = [&](double v) { return encryptor.encrypt(encoder.encode(v, ctx->top_level(), ctx->default_scale()), rng); };
    auto dec = [&](const Ciphertext& c) { return encoder.decode_scalar(decryptor.decrypt(c)); };

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    double worst_rel = 0.0, worst_add = 0.0, worst_mul = 0.0;
    bool sizes_ok = true;
    for (int i = 0; i < 50; ++i) {
        const double u = dist(gen);
        const double v = dist(gen);
        const auto cu = enc(u);
        const auto cv = enc(v);
        worst_rel = std::max(worst_rel, std::abs(dec(cu) - u) / std::abs(u));
        worst_add = std::max(worst_add, std::abs(dec(eval.add(cu, cv)) - (u + v)));
        const auto prod = eval.multiply(cu, cv);
        sizes_ok = sizes_ok && prod.size() == 2 && eval.relinearize(eval.tensor(cu, cv)).size() == 2;
        worst_mul = std::max(worst_mul, std::abs(dec(prod) - u * v));
    }
    // Depth law: d sequential multiplications succeed iff d <= chain length - 1.
    const std::size_t limit = ctx->params().chain_length() - 1;
    auto c = enc(1.0);
    std::size_t done = 0;
    bool law = true;
    for (std::size_t d = 1; d <= limit + 1; ++d) {
        try {
            c = eval.multiply(c, eval.mod_switch_to(enc(1.0), c.level));
            ++done;
            law = law && d <= limit && std::abs(dec(c) - 1.0) < 1e-3 && c.size() == 2;
        } catch (const DepthError&) {
            law = law && d == limit + 1;
        }
    }
    law = law && done == limit;
    const bool pass = worst_rel <= std::ldexp(1.0, -20) && worst_add <= 1e-4 && worst_mul <= 1e-3 && law && sizes_ok;
    return {pass, fmt::format("roundtrip rel {:.2e} (<= {:.2e}), add {:.2e} (<= 1e-4), mul {:.2e} (<= 1e-3), "
                              "{} of {} multiplications before depth error, relinearized size 2: {}",
                              worst_rel, std::ldexp(1.0, -20), worst_add, worst_mul, done, limit,
                              sizes_ok ? "yes" : "no")};
}

// 2. Ring multiplication against schoolbook negacyclic convolution; NTT roundtrip.
Outcome ring_oracle(const Options&) {
    std::mt19937_64 gen(2);
    const std::size_t degrees[] = {2, 4, 8, 16, 32, 64};
    std::size_t mismatches = 0, roundtrip_failures = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = degrees[rep % 6];
        const int bits = 20 + static_cast<int>(gen() % 41);
        const auto params = ring::RingParams::create(n, ring::generate_ntt_primes(n, {bits}));
        const std::uint64_t q = params->modulus(0).value();
        ring::RingElem a(params, {0}), b(params, {0});
        std::uniform_int_distribution<std::uint64_t> dist(0, q - 1);
        for (std::size_t i = 0; i < n; ++i) {
            a.row(0)[i] = dist(gen);
            b.row(0)[i] = dist(gen);
        }
        const auto c = ring::ring_mul(a, b);
        std::vector<std::uint64_t> expect(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto p = static_cast<std::uint64_t>(static_cast<ring::u128>(a.row(0)[i]) * b.row(0)[j] % q);
                const std::size_t k = (i + j) % n;
                expect[k] = i + j < n ? (expect[k] + p) % q : (expect[k] + q - p) % q;
            }
        }
        if (!std::equal(expect.begin(), expect.end(), c.row(0))) ++mismatches;
        if (ring::ntt_transform(ring::ntt_transform(a, ring::Direction::forward), ring::Direction::inverse) != a) {
            ++roundtrip_failures;
        }
    }
    return {mismatches == 0 && roundtrip_failures == 0,
            fmt::format("1000 cases at N <= 64: {} product mismatches, {} NTT roundtrip failures", mismatches,
                        roundtrip_failures)};
}

// 3. Analytic partials against central finite differences.
Outcome gradient_suite(const Options&) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst[2] = {0.0, 0.0};
    const wnn::Activation modes[] = {wnn::Activation::poly, wnn::Activation::exact};
    for (int cfg = 0; cfg < 100; ++cfg) {
        const wnn::WnnShape shape{1 + gen() % 4, 1 + gen() % 4};
        wnn::WnnParams p;
        p.shape = shape;
        static_cast<wnn::ParamGroups&>(p) = wnn::ParamGroups::zeros(shape);
        for (auto* g : p.groups()) {
            for (double& v : *g) v = u(gen);
        }
        for (double& a : p.a) a = (gen() % 2 ? 1.0 : -1.0) * (0.8 + 0.7 * (u(gen) + 1.0));
        std::vector<double> x(shape.nin);
        for (double& v : x) v = u(gen);
        const double y = static_cast<double>(gen() % 2);
        for (int m = 0; m < 2; ++m) {
            const auto g = wnn::gradients(p, x, y, modes[m]);
            auto loss = [&](const wnn::WnnParams& q) {
                const double r = y - wnn::forward(q, x, modes[m]).yhat;
                return r * r;
            };
            auto pg = p.groups();
            const auto gg = g.groups();
            for (std::size_t k = 0; k < pg.size(); ++k) {
                for (std::size_t i = 0; i < pg[k]->size(); ++i) {
                    const double h = 1e-5;
                    auto plus = p, minus = p;
                    (*plus.groups()[k])[i] += h;
                    (*minus.groups()[k])[i] -= h;
                    const double fd = (loss(plus) - loss(minus)) / (2 * h);
                    const double an = (*gg[k])[i];
                    const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3});
                    worst[m] = std::max(worst[m], rel);
                }
            }
        }
    }
    return {worst[0] <= 1e-6 && worst[1] <= 1e-5,
            fmt::format("100 configurations: worst relative error poly {:.2e} (<= 1e-6), exact {:.2e} (<= 1e-5)",
                        worst[0], worst[1])};
}

// 4. Polynomial activation fidelity on |t| <= 1.
Outcome activation_fidelity(const Options&) {
    const double at_one = wnn::activation(1.0, wnn::Activation::poly).value;
    double gap = 0.0, where = 0.0;
    for (int i = -100000; i <= 100000; ++i) {
        const double t = i / 100000.0;
        const double d = std::abs(wnn::activation(t, wnn::Activation::poly).value -
                                  wnn::activation(t, wnn::Activation::exact).value);
        if (d > gap) {
            gap = d;
            where = t;
        }
    }
    const double expect = std::abs(0.5 - std::exp(-1.0));
    return {at_one == 0.5 && std::abs(gap - expect) <= 1e-4 && std::abs(std::abs(where) - 1.0) < 1e-9,
            fmt::format("f_poly(1) = {}, max gap {:.6f} at t = {} (expected {:.6f})", at_one, gap, where, expect)};
}

// 5. Encrypted training follows the plaintext polynomial trainer batch by batch.
Outcome shadow_parity(const Options& opt) {
    const auto registry = data::load_registry(data::default_dataset_dir());
    const auto& schema = data::find_schema(registry, "haberman");
    data::PipelineOptions popts;
    popts.split.seed = 1;
    popts.smote_seed = 1;
    const auto prep = data::prepare(schema, popts);
    const wnn::WnnShape shape = wnn::WnnShape::square(prep.train.n_features);
    auto cfg = cli::RunConfig::default_train_config();
    cfg.max_epochs = opt.shadow_epochs;
    // Early stopping off: the comparison must cover every epoch.
    cfg.epsilon = std::numeric_limits<double>::min();

    std::vector<std::vector<double>> plain;
    wnn::train_plain(prep.train, shape, cfg, wnn::Activation::poly,
                     [&](const wnn::BatchEvent& e) { plain.push_back(e.params->flatten()); });

    const auto ctx = ckks::CkksContext::create(ckks::CkksParams::test_insecure_default());
    ppwnn::KeyCustodian custodian(ctx, 1);
    const ppwnn::ComputeEngine engine(custodian.public_bundle());
    ring::Prng rng(2);
    const auto enc = ppwnn::encrypt_dataset(prep.train, custodian.public_bundle(), rng);
    std::vector<double> drift;
    std::size_t batch = 0;
    const auto res = ppwnn::train_encrypted(enc, shape, cfg, {custodian, engine}, [&](const wnn::BatchEvent& e) {
        const auto v = e.params->flatten();
        double d = std::numeric_limits<double>::infinity();
        if (batch < plain.size()) {
            d = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) d = std::max(d, std::abs(v[k] - plain[batch][k]));
        }
        drift.push_back(d);
        ++batch;
    });
    std::size_t tight = 0;
    while (tight < drift.size() && drift[tight] <= 1e-2) ++tight;
    const double worst = drift.empty() ? 0.0 : *std::max_element(drift.begin(), drift.end());
    const bool pass = drift.size() == plain.size() && res.report.epochs_run == opt.shadow_epochs && tight >= 20 &&
                      worst <= 0.05;
    return {pass, fmt::format("Haberman, {} epochs, {} batches: first {} batches within 1e-2, max drift {:.2e} "
                              "(<= 0.05), depth used {}",
                              res.report.epochs_run, drift.size(), tight, worst, res.max_depth_consumed)};
}

// 6. Plaintext and encrypted twins agree on every dataset.
Outcome accuracy_parity(const Options& opt) {
    cli::RunConfig base;
    base.train.max_epochs = opt.parity_epochs;
    base.save_encrypted_checkpoint = false;
    base.output_dir = opt.output_dir / "parity";
    base.dataset = "haberman";
    std::vector<std::string> names;
    for (const auto& s : data::load_registry(data::default_dataset_dir())) names.push_back(s.name);
    const auto res = cli::run_compare(base, names);
    fmt::print("{}", cli::format_compare_table(res.rows));
    std::string failing;
    for (const auto& r : res.rows) {
        if (r.accuracy_gap() > 0.1 || r.auc_gap() > 0.1) {
            failing += fmt::format(" {} (dAcc {:.3f}, dAUC {:.3f})", r.dataset, r.accuracy_gap(), r.auc_gap());
        }
    }
    return {failing.empty() && res.rows.size() == names.size(),
            fmt::format("{} datasets, {} epoch(s) each; outside 0.10:{}", res.rows.size(), opt.parity_epochs,
                        failing.empty() ? " none" : failing)};
}

// 7. Dataset fixture counts and the Fertility balance step.
Outcome dataset_fixtures(const Options&) {
    struct Expect {
        const char* name;
        std::size_t n, c0, c1;
    };
    const Expect table[] = {{"haberman", 306, 225, 81},  {"coimbra", 116, 52, 64},  {"fertility", 100, 88, 12},
                            {"heart", 303, 138, 165},    {"diabetes", 768, 500, 268}, {"banknote", 1372, 762, 610},
                            {"qualitative_bankruptcy", 250, 143, 107}};
    const auto registry = data::load_registry(data::default_dataset_dir());
    std::string bad;
    for (const auto& e : table) {
        const auto& schema = data::find_schema(registry, e.name);
        const auto d = data::load_dataset(schema.csv_path(), schema);
        const auto counts = d.class_counts();
        if (d.size() != e.n || counts[0] != e.c0 || counts[1] != e.c1) {
            bad += fmt::format(" {} {} ({}/{})", e.name, d.size(), counts[0], counts[1]);
        }
    }
    const auto& fert = data::find_schema(registry, "fertility");
    std::mt19937_64 rng(1);
    const auto balanced = data::smote_balance(data::load_dataset(fert.csv_path(), fert), 5, rng);
    const auto bc = balanced.class_counts();
    const bool smote_ok = bc[0] == 88 && bc[1] == 88;
    return {bad.empty() && smote_ok, fmt::format("7 fixtures{}; Fertility SMOTE {}/{}",
                                                 bad.empty() ? " match" : " mismatch:" + bad, bc[0], bc[1])};
}

// 8. Encrypted epoch on Haberman at the secure profile.
Outcome secure_timing(const Options& opt) {
    cli::RunConfig c;
    c.dataset = "haberman";
    c.mode = cli::RunMode::encrypted;
    c.activation = wnn::Activation::poly;
    c.profile = "secure";
    c.train.max_epochs = 1;
    c.save_encrypted_checkpoint = false;
    c.output_dir = opt.output_dir / "secure";
    const auto r = cli::run_train(c);
    const bool reported = r.train.epochs_run == 1 && r.train.epoch_seconds.size() == 1 && r.train.epoch_seconds[0] > 0;
    const double s = reported ? r.train.epoch_seconds[0] : 0.0;
    return {reported, fmt::format("1 epoch, {:.1f} s ({} the 600 s target), test accuracy {:.3f}", s,
                                  s <= 600.0 ? "within" : "over", r.test.accuracy)};
}

// 9. Rank AUC against brute-force pair counting.
Outcome auc_oracle(const Options&) {
    std::mt19937_64 gen(9);
    double worst = 0.0;
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 200; ++n) {
        for (int coarse = 0; coarse < 2; ++coarse) {
            std::vector<int> labels(n);
            std::vector<double> scores(n);
            for (std::size_t i = 0; i < n; ++i) {
                labels[i] = static_cast<int>(gen() % 2);
                scores[i] = coarse ? static_cast<double>(gen() % 5) : std::uniform_real_distribution<double>()(gen);
            }
            labels[0] = 0;
            labels[1] = 1;
            double wins = 0.0, pairs = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (labels[i] != 1 || labels[j] != 0) continue;
                    pairs += 1.0;
                    wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
                }
            }
            worst = std::max(worst, std::abs(metrics::auc(labels, scores) - wins / pairs));
            ++cases;
        }
    }
    return {worst <= 1e-12, fmt::format("{} cases, n = 2..200, worst difference {:.1e}", cases, worst)};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome(const Options&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite"};
    Options opt;
    std::vector<int> only;
    app.add_option("--only", only, "Criteria to run (default: all)");
    app.add_option("--output-dir", opt.output_dir, "Scratch directory for training runs")->capture_default_str();
    app.add_option("--parity-epochs", opt.parity_epochs, "Epochs per dataset for criterion 6")->capture_default_str();
    app.add_option("--shadow-epochs", opt.shadow_epochs, "Epochs for criterion 5")->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::warn);

    const Criterion criteria[] = {
        {1, "CKKS correctness", ckks_correctness},
        {2, "ring oracle", ring_oracle},
        {3, "gradient finite differences", gradient_suite},
        {4, "activation fidelity", activation_fidelity},
        {5, "shadow-trajectory parity", shadow_parity},
        {6, "plaintext/encrypted accuracy parity", accuracy_parity},
        {7, "dataset fixtures", dataset_fixtures},
        {8, "secure-profile timing", secure_timing},
        {9, "AUC oracle", auc_oracle},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(opt);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("[{}] criterion {}: {} - {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail, secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
