#include "cryptwnn/wnn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace cryptwnn::wnn {

std::string_view to_string(StopRule r) noexcept { return r == StopRule::literal ? "literal" : "any"; }

StopRule stop_rule_from_string(std::string_view s) {
    if (s == "literal") return StopRule::literal;
    if (s == "any") return StopRule::any;
    throw std::invalid_argument(fmt::format("unknown stop rule '{}' (expected literal or any)", s));
}

void TrainConfig::validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument(fmt::format("learning rate must be positive, got {}", eta));
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument(fmt::format("momentum must be in [0, 1), got {}", alpha));
    if (!(epsilon > 0.0)) throw std::invalid_argument(fmt::format("convergence epsilon must be positive, got {}", epsilon));
    if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
    if (!(max_step >= 0.0)) throw std::invalid_argument(fmt::format("max_step must be >= 0, got {}", max_step));
}

std::mt19937_64 init_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
    return std::mt19937_64(seq);
}

BatchSchedule::BatchSchedule(std::size_t n_samples, std::size_t batch_size, std::uint64_t seed)
    : n_(n_samples), batch_(batch_size), seed_(seed) {
    if (batch_ == 0) throw std::invalid_argument("batch size must be positive");
}

std::size_t BatchSchedule::batches_per_epoch() const noexcept { return (n_ + batch_ - 1) / batch_; }

std::vector<std::vector<std::size_t>> BatchSchedule::epoch(std::size_t e) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32), 2u,
                      static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(e >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < n_; s += batch_) {
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(s),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n_, s + batch_)));
    }
    return out;
}

double clamp_dilation(double a) noexcept {
    if (std::abs(a) >= kMinDilation) return a;
    return a < 0.0 ? -kMinDilation : kMinDilation;
}

double clip_step(double delta, double max_step) noexcept {
    if (max_step <= 0.0) return delta;
    return std::clamp(delta, -max_step, max_step);
}

void update_step(WnnParams& p, MomentumState& m, const Gradients& g, const TrainConfig& cfg) {
    auto pg = p.groups();
    auto mg = m.groups();
    const auto gg = g.groups();
    for (std::size_t k = 0; k < pg.size(); ++k) {
        auto& param = *pg[k];
        auto& delta = *mg[k];
        const auto& grad = *gg[k];
        if (param.size() != delta.size() || param.size() != grad.size()) {
            throw ShapeError(fmt::format("group {} size mismatch in update", ParamGroups::kNames[k]));
        }
        for (std::size_t i = 0; i < param.size(); ++i) {
            delta[i] = clip_step(-cfg.eta * grad[i] + cfg.alpha * delta[i], cfg.max_step);
            param[i] += delta[i];
        }
    }
    for (double& a : p.a) a = clamp_dilation(a);
}

bool diverged(const ParamGroups& p) noexcept {
    for (const auto* g : p.groups()) {
        for (double v : *g) {
            if (!std::isfinite(v) || std::abs(v) > kDivergenceBound) return true;
        }
    }
    return false;
}

bool ConvergenceMonitor::observe_batch(std::span<const int> labels, std::span<const double> scores) {
    std::vector<double> y(labels.begin(), labels.end());
    last_mse_ = mse(y, scores);
    for (std::size_t i = 0; i < labels.size(); ++i) correct_ += threshold_label(scores[i]) == labels[i] ? 1 : 0;
    seen_ += labels.size();
    last_delta_ = std::abs(last_mse_ - prev_mse_);
    prev_mse_ = last_mse_;
    nonfinite_ = !std::isfinite(last_mse_);
    if (nonfinite_) return true;
    const bool loss_settled = last_delta_ < cfg_.epsilon;
    if (!cfg_.target_accuracy) return loss_settled;
    const bool target_beaten = running_accuracy() > *cfg_.target_accuracy;
    return cfg_.stop_rule == StopRule::literal ? (loss_settled && target_beaten) : (loss_settled || target_beaten);
}

double ConvergenceMonitor::running_accuracy() const noexcept {
    return seen_ == 0 ? 0.0 : static_cast<double>(correct_) / static_cast<double>(seen_);
}

double TrainReport::mean_epoch_seconds() const noexcept {
    if (epoch_seconds.empty()) return 0.0;
    return std::accumulate(epoch_seconds.begin(), epoch_seconds.end(), 0.0) / static_cast<double>(epoch_seconds.size());
}

int threshold_label(double score) noexcept { return score >= 0.5 ? 1 : 0; }

TrainResult train_plain(const data::Dataset& train, const WnnShape& shape, const TrainConfig& cfg,
                        Activation mode, const BatchObserver& observer) {
    auto rng = init_rng(cfg.seed);
    auto [p, m] = init_params(shape, rng);
    return train_plain(train, std::move(p), std::move(m), cfg, mode, observer);
}

TrainResult train_plain(const data::Dataset& train, WnnParams params, MomentumState momentum,
                        const TrainConfig& cfg, Activation mode, const BatchObserver& observer) {
    using Clock = std::chrono::steady_clock;
    cfg.validate();
    params.validate();
    data::require_binary_labels(train);
    if (train.n_features != params.shape.nin) {
        throw ShapeError(fmt::format("dataset has {} features, network expects {}", train.n_features, params.shape.nin));
    }
    TrainResult out{std::move(params), std::move(momentum), {}};
    auto& p = out.params;
    auto& report = out.report;
    const BatchSchedule schedule(train.size(), cfg.batch_size, cfg.seed);
    ConvergenceMonitor monitor(cfg);
    const auto t0 = Clock::now();
    bool stop = false;
    for (std::size_t epoch = 0; epoch < cfg.max_epochs && !stop; ++epoch) {
        const auto e0 = Clock::now();
        monitor.start_epoch();
        const auto batches = schedule.epoch(epoch);
        for (std::size_t bi = 0; bi < batches.size() && !stop; ++bi) {
            const auto& batch = batches[bi];
            Gradients sum;
            static_cast<ParamGroups&>(sum) = ParamGroups::zeros(p.shape);
            std::vector<int> labels;
            std::vector<double> scores;
            for (std::size_t idx : batch) {
                const auto x = train.row(idx);
                const double y = train.labels[idx];
                labels.push_back(train.labels[idx]);
                scores.push_back(forward(p, x, mode).yhat);
                const auto g = gradients(p, x, y, mode);
                auto sg = sum.groups();
                const auto gg = g.groups();
                for (std::size_t k = 0; k < sg.size(); ++k) {
                    for (std::size_t i = 0; i < sg[k]->size(); ++i) (*sg[k])[i] += (*gg[k])[i];
                }
            }
            const double inv_b = 1.0 / static_cast<double>(batch.size());
            for (auto* g : sum.groups()) {
                for (double& v : *g) v *= inv_b;
            }
            update_step(p, out.momentum, sum, cfg);
            stop = monitor.observe_batch(labels, scores);
            report.loss_trace.push_back(monitor.last_mse());
            ++report.batches_run;
            if (observer) {
                observer({epoch, bi, monitor.last_mse(), monitor.running_accuracy(),
                          std::chrono::duration<double, std::milli>(Clock::now() - t0).count(), &p});
            }
            if (monitor.loss_nonfinite() || diverged(p)) {
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
    return out;
}

Predictions predict_labels(const WnnParams& p, const data::Dataset& d, Activation mode) {
    Predictions out;
    out.scores.reserve(d.size());
    out.labels.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double s = forward(p, d.row(i), mode).yhat;
        out.scores.push_back(s);
        out.labels.push_back(threshold_label(s));
    }
    return out;
}

}  // namespace cryptwnn::wnn
