#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "cryptwnn/ppwnn/roles.hpp"

namespace cryptwnn::ppwnn {

KeyCustodian::KeyCustodian(ckks::ContextPtr ctx, std::uint64_t seed)
    : KeyCustodian(
          [&] {
              ring::Prng key_rng(seed);
              return ckks::keygen(ctx, key_rng);
          }(),
          seed ^ 0x9e3779b97f4a7c15ULL) {}

KeyCustodian::KeyCustodian(ckks::KeySet keys, std::uint64_t seed)
    : keys_(std::move(keys)),
      rng_(seed),
      encoder_(keys_.context),
      encryptor_(keys_.context, keys_.pub),
      decryptor_(keys_.context, keys_.secret) {}

PublicKeyBundle KeyCustodian::public_bundle() const { return {keys_.context, keys_.pub, keys_.relin}; }

Ciphertext KeyCustodian::encrypt_value(double v) {
    const auto& ctx = keys_.context;
    return encryptor_.encrypt(encoder_.encode(v, ctx->top_level(), ctx->default_scale()), rng_);
}

double KeyCustodian::decrypt_value(const Ciphertext& ct) const {
    return encoder_.decode(decryptor_.decrypt(ct), 1).front();
}

std::vector<double> KeyCustodian::decrypt_values(std::span<const Ciphertext> cts) const {
    std::vector<double> out;
    out.reserve(cts.size());
    for (const auto& ct : cts) out.push_back(decrypt_value(ct));
    return out;
}

std::vector<int> KeyCustodian::decrypt_labels(std::span<const Ciphertext> cts) const {
    std::vector<int> out;
    out.reserve(cts.size());
    for (const auto& ct : cts) out.push_back(decrypt_value(ct) >= 0.5 ? 1 : 0);
    return out;
}

EncryptedWnnParams KeyCustodian::encrypt_state(std::uint64_t generation) {
    for (double& a : params_.a) a = wnn::clamp_dilation(a);
    EncryptedWnnParams enc;
    enc.shape = params_.shape;
    enc.generation = generation;
    auto put = [&](const wnn::ParamGroups& clear, EncryptedGroups& out) {
        const auto src = clear.groups();
        auto dst = out.groups();
        for (std::size_t k = 0; k < src.size(); ++k) {
            dst[k]->clear();
            for (double v : *src[k]) dst[k]->push_back(encrypt_value(v));
        }
    };
    put(params_, enc.values);
    put(momentum_, enc.momentum);
    for (double a : params_.a) enc.inv_a.push_back(encrypt_value(1.0 / a));
    generation_ = generation;
    return enc;
}

EncryptedWnnParams KeyCustodian::encrypt_params(const wnn::WnnParams& p, const wnn::MomentumState& m,
                                                std::uint64_t generation) {
    p.validate();
    params_ = p;
    momentum_ = m;
    return encrypt_state(generation);
}

std::pair<wnn::WnnParams, wnn::MomentumState> KeyCustodian::decrypt_params(const EncryptedWnnParams& enc) const {
    wnn::WnnParams p;
    p.shape = enc.shape;
    wnn::MomentumState m;
    auto get = [&](const EncryptedGroups& in, wnn::ParamGroups& out) {
        const auto src = in.groups();
        auto dst = out.groups();
        for (std::size_t k = 0; k < src.size(); ++k) *dst[k] = decrypt_values(*src[k]);
    };
    get(enc.values, p);
    get(enc.momentum, m);
    p.validate();
    return {std::move(p), std::move(m)};
}

std::vector<double> KeyCustodian::decrypt_inv_a(const EncryptedWnnParams& enc) const {
    return decrypt_values(enc.inv_a);
}

EncryptedWnnParams KeyCustodian::refresh(const EncryptedWnnParams& enc) {
    auto [p, m] = decrypt_params(enc);
    params_ = std::move(p);
    momentum_ = std::move(m);
    return encrypt_state(enc.generation + 1);
}

EncryptedWnnParams KeyCustodian::refresh_after_update(const EncryptedWnnParams& enc, double max_step) {
    if (enc.generation != generation_ || !(enc.shape == params_.shape)) {
        throw std::logic_error(fmt::format("refresh of generation {} but the custodian holds generation {}",
                                           enc.generation, generation_));
    }
    auto [p, m] = decrypt_params(enc);
    auto pg = p.groups();
    auto mg = m.groups();
    const auto prev = params_.groups();
    for (std::size_t k = 0; k < pg.size(); ++k) {
        for (std::size_t i = 0; i < pg[k]->size(); ++i) {
            double& d = (*mg[k])[i];
            const double capped = wnn::clip_step(d, max_step);
            if (capped != d) {
                d = capped;
                (*pg[k])[i] = (*prev[k])[i] + capped;
            }
        }
    }
    params_ = std::move(p);
    momentum_ = std::move(m);
    return encrypt_state(enc.generation + 1);
}

}  // namespace cryptwnn::ppwnn
