#include "cryptwnn/ppwnn/trainer.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "cryptwnn/ckks/errors.hpp"

namespace cryptwnn::ppwnn {
namespace {

std::size_t deepest_consumption(const EncryptedWnnParams& enc, std::size_t top) {
    std::size_t deepest = top;
    for (const auto* g : enc.values.groups()) {
        for (const auto& c : *g) deepest = std::min(deepest, c.level);
    }
    return top - deepest;
}

}  // namespace

EncryptedTrainResult train_encrypted(const EncryptedDataset& train, const wnn::WnnShape& shape,
                                     const wnn::TrainConfig& cfg, RoleSplit roles,
                                     const wnn::BatchObserver& observer) {
    auto rng = wnn::init_rng(cfg.seed);
    auto [p, m] = wnn::init_params(shape, rng);
    return train_encrypted(train, std::move(p), std::move(m), cfg, roles, observer);
}

EncryptedTrainResult train_encrypted(const EncryptedDataset& train, wnn::WnnParams params,
                                     wnn::MomentumState momentum, const wnn::TrainConfig& cfg, RoleSplit roles,
                                     const wnn::BatchObserver& observer) {
    using Clock = std::chrono::steady_clock;
    cfg.validate();
    params.validate();
    if (train.nin() != params.shape.nin) {
        throw wnn::ShapeError(
            fmt::format("dataset has {} features, network expects {}", train.nin(), params.shape.nin));
    }
    if (train.context() != roles.engine.context() || roles.custodian.context() != roles.engine.context()) {
        throw ckks::ContextMismatchError("dataset, custodian and engine must share one context");
    }
    auto& custodian = roles.custodian;
    const auto& engine = roles.engine;
    const std::size_t top = engine.context()->top_level();

    EncryptedTrainResult out;
    out.params = custodian.encrypt_params(params, momentum);
    auto& report = out.report;
    const wnn::BatchSchedule schedule(train.size(), cfg.batch_size, cfg.seed);
    wnn::ConvergenceMonitor monitor(cfg);
    const auto t0 = Clock::now();
    bool stop = false;
    for (std::size_t epoch = 0; epoch < cfg.max_epochs && !stop; ++epoch) {
        const auto e0 = Clock::now();
        monitor.start_epoch();
        const auto batches = schedule.epoch(epoch);
        for (std::size_t bi = 0; bi < batches.size() && !stop; ++bi) {
            const auto batch_out = engine.batch_gradients(out.params, train, batches[bi]);
            const auto updated = engine.update(out.params, batch_out.gradients, cfg);
            out.max_depth_consumed = std::max(out.max_depth_consumed, deepest_consumption(updated, top));

            const auto labels = custodian.decrypt_labels(batch_out.y);
            const auto scores = custodian.decrypt_values(batch_out.yhat);
            stop = monitor.observe_batch(labels, scores);
            out.params = custodian.refresh_after_update(updated, cfg.max_step);

            report.loss_trace.push_back(monitor.last_mse());
            ++report.batches_run;
            if (observer) {
                observer({epoch, bi, monitor.last_mse(), monitor.running_accuracy(),
                          std::chrono::duration<double, std::milli>(Clock::now() - t0).count(),
                          &custodian.current_params()});
            }
            if (monitor.loss_nonfinite() || wnn::diverged(custodian.current_params())) {
                report.status = "diverged";
                stop = true;
            } else if (stop) {
                report.status = "converged";
            }
        }
        report.epoch_seconds.push_back(std::chrono::duration<double>(Clock::now() - e0).count());
        report.epoch_accuracy.push_back(monitor.running_accuracy());
        report.best_train_accuracy = std::max(report.best_train_accuracy, monitor.running_accuracy());
        ++report.epochs_run;
    }
    out.clear_params = custodian.current_params();
    out.clear_momentum = custodian.current_momentum();
    return out;
}

EncryptedEvaluation test_encrypted(const EncryptedWnnParams& params, const EncryptedDataset& test, RoleSplit roles) {
    EncryptedEvaluation out;
    const auto yhat = roles.engine.predict(params, test);
    out.scores = roles.custodian.decrypt_values(yhat);
    std::vector<Ciphertext> labels;
    labels.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) labels.push_back(test.at(i).y);
    out.labels = roles.custodian.decrypt_labels(labels);
    std::vector<int> predicted;
    predicted.reserve(out.scores.size());
    for (double s : out.scores) predicted.push_back(wnn::threshold_label(s));
    out.metrics = metrics::evaluate(out.labels, predicted, out.scores);
    return out;
}

}  // namespace cryptwnn::ppwnn
