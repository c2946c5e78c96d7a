#include "cryptwnn/wnn/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cryptwnn/data/preprocess.hpp"

namespace cryptwnn::wnn {

std::string_view to_string(Activation a) noexcept {
    return a == Activation::exact ? "exact" : "poly";
}

Activation activation_from_string(std::string_view s) {
    if (s == "exact") return Activation::exact;
    if (s == "poly") return Activation::poly;
    throw std::invalid_argument(fmt::format("unknown activation '{}' (expected exact or poly)", s));
}

void WnnShape::validate() const {
    if (nin == 0 || nhn == 0) throw ShapeError(fmt::format("invalid shape nin = {}, nhn = {}", nin, nhn));
}

ParamGroups ParamGroups::zeros(const WnnShape& shape) {
    ParamGroups g;
    g.w.assign(shape.weight_count(), 0.0);
    g.W.assign(shape.nhn, 0.0);
    g.b.assign(shape.nhn, 0.0);
    g.a.assign(shape.nhn, 0.0);
    return g;
}

std::vector<double> ParamGroups::flatten() const {
    std::vector<double> out;
    for (const auto* g : groups()) out.insert(out.end(), g->begin(), g->end());
    return out;
}

void WnnParams::validate() const {
    shape.validate();
    if (w.size() != shape.weight_count() || W.size() != shape.nhn || b.size() != shape.nhn ||
        a.size() != shape.nhn) {
        throw ShapeError(fmt::format("parameter groups do not match shape {}x{}", shape.nin, shape.nhn));
    }
}

std::pair<WnnParams, MomentumState> init_params(const WnnShape& shape, std::mt19937_64& rng) {
    shape.validate();
    WnnParams p;
    static_cast<ParamGroups&>(p) = ParamGroups::zeros(shape);
    p.shape = shape;
    for (auto* g : p.groups()) {
        for (double& v : *g) v = data::uniform_open(rng);
    }
    MomentumState m;
    static_cast<ParamGroups&>(m) = ParamGroups::zeros(shape);
    return {std::move(p), std::move(m)};
}

ActivationValue activation(double t, Activation mode) noexcept {
    if (mode == Activation::exact) {
        const double e = std::exp(-t * t);
        return {e, -2.0 * t * e};
    }
    const double t2 = t * t;
    return {1.0 - t2 + 0.5 * t2 * t2, -2.0 * t + 2.0 * t2 * t};
}

ForwardResult forward(const WnnParams& p, std::span<const double> x, Activation mode) {
    if (x.size() != p.shape.nin) {
        throw ShapeError(fmt::format("input has {} features, network expects {}", x.size(), p.shape.nin));
    }
    const std::size_t nhn = p.shape.nhn;
    ForwardResult r;
    r.t.resize(nhn);
    r.f.resize(nhn);
    r.fprime.resize(nhn);
    for (std::size_t j = 0; j < nhn; ++j) {
        if (!(std::abs(p.a[j]) >= kMinDilation)) {
            throw std::domain_error(fmt::format("dilation a[{}] = {} below the minimum {}", j, p.a[j], kMinDilation));
        }
        double u = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) u += p.weight(i, j) * x[i];
        r.t[j] = (u - p.b[j]) / p.a[j];
        const auto act = activation(r.t[j], mode);
        r.f[j] = act.value;
        r.fprime[j] = act.derivative;
        r.yhat += p.W[j] * act.value;
    }
    return r;
}

double mse(std::span<const double> y, std::span<const double> yhat) {
    if (y.empty() || y.size() != yhat.size()) {
        throw std::invalid_argument(fmt::format("mse needs equal nonempty inputs, got {} and {}", y.size(), yhat.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    return s / static_cast<double>(y.size());
}

Gradients gradients(const WnnParams& p, std::span<const double> x, double y, Activation mode) {
    const auto fw = forward(p, x, mode);
    const double r = y - fw.yhat;
    Gradients g;
    static_cast<ParamGroups&>(g) = ParamGroups::zeros(p.shape);
    for (std::size_t j = 0; j < p.shape.nhn; ++j) {
        g.W[j] = -2.0 * r * fw.f[j];
        const double s = 2.0 * r * p.W[j] * fw.fprime[j] / p.a[j];
        g.b[j] = s;
        g.a[j] = s * fw.t[j];
        for (std::size_t i = 0; i < p.shape.nin; ++i) g.w[i * p.shape.nhn + j] = -s * x[i];
    }
    return g;
}

}  // namespace cryptwnn::wnn
