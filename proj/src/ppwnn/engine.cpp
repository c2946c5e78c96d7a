#include <algorithm>

#include <fmt/format.h>

#include "cryptwnn/ckks/errors.hpp"
#include "cryptwnn/ppwnn/roles.hpp"

namespace cryptwnn::ppwnn {
namespace {

class LevelTracker {
public:
    explicit LevelTracker(std::size_t top) : min_(top), top_(top) {}
    const Ciphertext& operator()(const Ciphertext& c) {
        min_ = std::min(min_, c.level);
        return c;
    }
    DepthReport report() const { return {top_, min_}; }

private:
    std::size_t min_;
    std::size_t top_;
};

void require_fresh(const EncryptedWnnParams& enc, std::size_t top) {
    for (const auto* g : enc.values.groups()) {
        for (const auto& c : *g) {
            if (c.level != top) throw ckks::DepthError("parameters must be refreshed to the top level before use");
        }
    }
}

}  // namespace

ComputeEngine::ComputeEngine(PublicKeyBundle keys) : keys_(std::move(keys)), eval_(keys_.context, keys_.relin) {}

void ComputeEngine::require_depth(std::size_t depth, const char* stage) const {
    const std::size_t available = keys_.context->params().max_depth();
    if (available < depth) {
        throw ckks::DepthError(fmt::format("{} needs multiplicative depth {} but the modulus chain supports {}; "
                                           "use a longer coefficient modulus chain",
                                           stage, depth, available));
    }
}

BatchPrep ComputeEngine::prepare(const EncryptedWnnParams& enc) const {
    require_depth(kForwardDepth, "forward pass");
    require_fresh(enc, keys_.context->top_level());
    const std::size_t nin = enc.shape.nin;
    const std::size_t nhn = enc.shape.nhn;
    BatchPrep p;
    p.w_scaled.reserve(nin * nhn);
    for (std::size_t i = 0; i < nin; ++i) {
        for (std::size_t j = 0; j < nhn; ++j) {
            p.w_scaled.push_back(eval_.multiply(enc.values.w[i * nhn + j], enc.inv_a[j]));
        }
    }
    for (std::size_t j = 0; j < nhn; ++j) {
        p.b_scaled.push_back(eval_.multiply(enc.values.b[j], enc.inv_a[j]));
        p.W_scaled.push_back(eval_.multiply(enc.values.W[j], enc.inv_a[j]));
    }
    return p;
}

ForwardTrace ComputeEngine::forward(const EncryptedWnnParams& enc, const EncryptedSample& s) const {
    return forward(prepare(enc), enc, s);
}

ForwardTrace ComputeEngine::forward(const BatchPrep& prep, const EncryptedWnnParams& enc,
                                    const EncryptedSample& s) const {
    require_depth(kForwardDepth, "forward pass");
    const std::size_t nin = enc.shape.nin;
    const std::size_t nhn = enc.shape.nhn;
    if (s.x.size() != nin) {
        throw wnn::ShapeError(fmt::format("sample has {} features, network expects {}", s.x.size(), nin));
    }
    const std::size_t top = keys_.context->top_level();
    // x enters at the level of the per-batch products w_ij / a_j.
    std::vector<Ciphertext> xm;
    xm.reserve(nin);
    for (const auto& x : s.x) xm.push_back(eval_.mod_switch_to(x, top - 1));

    ForwardTrace tr;
    std::vector<const Ciphertext*> wcol(nin);
    std::vector<const Ciphertext*> xcol(nin);
    for (std::size_t i = 0; i < nin; ++i) xcol[i] = &xm[i];
    for (std::size_t j = 0; j < nhn; ++j) {
        for (std::size_t i = 0; i < nin; ++i) wcol[i] = &prep.w_scaled[i * nhn + j];
        Ciphertext u = eval_.inner_product(wcol, xcol);
        Ciphertext t = eval_.sub(u, eval_.align(prep.b_scaled[j], u.level, u.scale));
        Ciphertext t2 = eval_.square(t);
        Ciphertext t4 = eval_.square(t2);
        Ciphertext half_t4 = eval_.multiply_constant(t4, 0.5, t2.scale);
        Ciphertext f = eval_.add_constant(eval_.sub(half_t4, eval_.mod_switch_to(t2, half_t4.level)), 1.0);
        tr.t3.push_back(eval_.multiply(eval_.mod_switch_to(t, t2.level), t2));
        tr.t.push_back(std::move(t));
        tr.t2.push_back(std::move(t2));
        tr.f.push_back(std::move(f));
    }
    std::vector<Ciphertext> Wm;
    Wm.reserve(nhn);
    for (std::size_t j = 0; j < nhn; ++j) Wm.push_back(eval_.mod_switch_to(enc.values.W[j], tr.f[j].level));
    std::vector<const Ciphertext*> wp(nhn);
    std::vector<const Ciphertext*> fp(nhn);
    for (std::size_t j = 0; j < nhn; ++j) {
        wp[j] = &Wm[j];
        fp[j] = &tr.f[j];
    }
    tr.yhat = eval_.inner_product(wp, fp);
    return tr;
}

BatchOutput ComputeEngine::batch_gradients(const EncryptedWnnParams& enc, const EncryptedDataset& data,
                                           std::span<const std::size_t> indices) const {
    require_depth(kTrainingDepth, "encrypted training");
    if (indices.empty()) throw std::invalid_argument("empty batch");
    const std::size_t nin = enc.shape.nin;
    const std::size_t nhn = enc.shape.nhn;
    LevelTracker track(keys_.context->top_level());
    const BatchPrep prep = prepare(enc);

    std::vector<ckks::ProductAccumulator> acc_W(nhn, ckks::ProductAccumulator(eval_));
    std::vector<ckks::ProductAccumulator> acc_w(nin * nhn, ckks::ProductAccumulator(eval_));
    std::vector<ckks::ProductAccumulator> acc_a(nhn, ckks::ProductAccumulator(eval_));
    std::vector<std::optional<Ciphertext>> sum_s(nhn);

    BatchOutput out;
    for (std::size_t idx : indices) {
        const EncryptedSample s = data.at(idx);
        ForwardTrace tr = forward(prep, enc, s);
        track(tr.yhat);
        // r = y - yhat
        const Ciphertext r = eval_.sub(eval_.align(s.y, tr.yhat.level, tr.yhat.scale), tr.yhat);
        for (std::size_t j = 0; j < nhn; ++j) {
            // f'(t) = 2 (t^3 - t); s = r (W / a) f'(t)
            const Ciphertext& t3 = tr.t3[j];
            const Ciphertext fprime =
                eval_.multiply_integer(eval_.sub(t3, eval_.align(tr.t[j], t3.level, t3.scale)), 2);
            const Ciphertext wfa = eval_.multiply(fprime, eval_.mod_switch_to(prep.W_scaled[j], fprime.level));
            const Ciphertext sj = eval_.multiply(r, eval_.mod_switch_to(wfa, r.level));
            track(sj);
            acc_W[j].add_product(r, eval_.mod_switch_to(tr.f[j], r.level));
            acc_a[j].add_product(sj, eval_.mod_switch_to(tr.t[j], sj.level));
            for (std::size_t i = 0; i < nin; ++i) {
                acc_w[i * nhn + j].add_product(sj, eval_.mod_switch_to(s.x[i], sj.level));
            }
            if (sum_s[j]) {
                eval_.add_inplace(*sum_s[j], sj);
            } else {
                sum_s[j] = sj;
            }
        }
        out.yhat.push_back(std::move(tr.yhat));
        out.y.push_back(s.y);
    }

    const double inv_b = 1.0 / static_cast<double>(indices.size());
    auto& g = out.gradients;
    for (std::size_t k = 0; k < nin * nhn; ++k) {
        g.w.push_back(eval_.multiply_constant(acc_w[k].finish(), -2.0 * inv_b));
        track(g.w.back());
    }
    for (std::size_t j = 0; j < nhn; ++j) {
        g.W.push_back(eval_.multiply_constant(acc_W[j].finish(), -2.0 * inv_b));
        g.b.push_back(eval_.multiply_constant(*sum_s[j], 2.0 * inv_b));
        g.a.push_back(eval_.multiply_constant(acc_a[j].finish(), 2.0 * inv_b));
        track(g.W.back());
        track(g.b.back());
        track(g.a.back());
    }
    out.depth = track.report();
    return out;
}

EncryptedWnnParams ComputeEngine::update(const EncryptedWnnParams& enc, const EncryptedGradients& g,
                                         const wnn::TrainConfig& cfg) const {
    cfg.validate();
    EncryptedWnnParams out;
    out.shape = enc.shape;
    out.generation = enc.generation;
    out.inv_a = enc.inv_a;
    const auto params = enc.values.groups();
    const auto deltas = enc.momentum.groups();
    const auto grads = g.groups();
    auto new_params = out.values.groups();
    auto new_deltas = out.momentum.groups();
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (grads[k]->size() != params[k]->size()) {
            throw wnn::ShapeError(fmt::format("gradient group {} has {} entries, expected {}",
                                              wnn::ParamGroups::kNames[k], grads[k]->size(), params[k]->size()));
        }
        for (std::size_t i = 0; i < params[k]->size(); ++i) {
            const Ciphertext& gi = (*grads[k])[i];
            Ciphertext step = eval_.multiply_constant(gi, -cfg.eta);
            const Ciphertext coast =
                eval_.multiply_constant(eval_.mod_switch_to((*deltas[k])[i], gi.level), cfg.alpha, step.scale);
            Ciphertext delta = eval_.add(step, coast);
            new_params[k]->push_back(eval_.add(eval_.align((*params[k])[i], delta.level, delta.scale), delta));
            new_deltas[k]->push_back(std::move(delta));
        }
    }
    return out;
}

std::vector<Ciphertext> ComputeEngine::predict(const EncryptedWnnParams& enc, const EncryptedDataset& data,
                                               std::span<const std::size_t> indices) const {
    const BatchPrep prep = prepare(enc);
    std::vector<Ciphertext> out;
    const std::size_t n = indices.empty() ? data.size() : indices.size();
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(forward(prep, enc, data.at(indices.empty() ? k : indices[k])).yhat);
    }
    return out;
}

}  // namespace cryptwnn::ppwnn
