#include "cryptwnn/ckks/encryptor.hpp"

#include <cmath>
#include <stdexcept>

#include "cryptwnn/ckks/encoder.hpp"
#include "cryptwnn/ckks/errors.hpp"

namespace cryptwnn::ckks {

using ring::Direction;
using ring::RingElem;

namespace {

RingElem first_rows(const RingElem& src, std::size_t count, const std::vector<std::size_t>& moduli) {
    RingElem out(src.params(), moduli, src.representation());
    std::copy(src.data().begin(), src.data().begin() + static_cast<std::ptrdiff_t>(count * src.degree()),
              out.data().begin());
    return out;
}

}  // namespace

Encryptor::Encryptor(ContextPtr ctx, PublicKey pk) : ctx_(std::move(ctx)), pk_(std::move(pk)) {
    if (!ctx_) throw std::invalid_argument("encryptor needs a context");
}

Ciphertext Encryptor::encrypt_zero(std::size_t level, double scale, ring::Prng& rng) const {
    if (level == 0 || level > ctx_->top_level()) {
        throw DepthError("encryption level " + std::to_string(level) + " exceeds the chain length " +
                         std::to_string(ctx_->top_level()));
    }
    const auto moduli = ctx_->level_moduli(level);
    RingElem u = ring::sample(ring::SampleKind::ternary, ctx_->ring(), moduli, rng);
    ring::ntt_inplace(u, Direction::forward);
    RingElem e0 = ring::sample(ring::SampleKind::gaussian, ctx_->ring(), moduli, rng);
    RingElem e1 = ring::sample(ring::SampleKind::gaussian, ctx_->ring(), moduli, rng);
    ring::ntt_inplace(e0, Direction::forward);
    ring::ntt_inplace(e1, Direction::forward);

    RingElem c0 = first_rows(pk_.b, level, moduli);
    RingElem c1 = first_rows(pk_.a, level, moduli);
    c0 *= u;
    c1 *= u;
    c0 += e0;
    c1 += e1;
    Ciphertext ct;
    ct.parts.push_back(std::move(c0));
    ct.parts.push_back(std::move(c1));
    ct.scale = scale;
    ct.level = level;
    return ct;
}

Ciphertext Encryptor::encrypt(const Plaintext& pt, ring::Prng& rng) const {
    if (pt.poly.representation() != ring::Representation::ntt || pt.poly.prime_count() != pt.level) {
        throw std::invalid_argument("plaintext must be in NTT form over its level's primes");
    }
    Ciphertext ct = encrypt_zero(pt.level, pt.scale, rng);
    ct.parts[0] += pt.poly;
    return ct;
}

Decryptor::Decryptor(ContextPtr ctx, SecretKey sk) : ctx_(std::move(ctx)), sk_(std::move(sk)) {
    if (!ctx_) throw std::invalid_argument("decryptor needs a context");
}

Plaintext Decryptor::decrypt(const Ciphertext& ct) const {
    if (ct.size() == 3) throw std::logic_error("size-3 ciphertext must be relinearized before decryption");
    if (ct.size() != 2) throw std::invalid_argument("ciphertext must have two components");
    if (ct.level == 0 || ct.level > ctx_->top_level() || ct.parts[0].prime_count() != ct.level) {
        throw std::invalid_argument("ciphertext level does not match its prime count");
    }
    const auto moduli = ctx_->level_moduli(ct.level);
    RingElem m = ct.parts[1];
    m *= first_rows(sk_.s, ct.level, moduli);
    m += ct.parts[0];
    return Plaintext{std::move(m), ct.scale, ct.level};
}

double Decryptor::noise_budget(const Ciphertext& ct, std::span<const double> expected) const {
    Encoder encoder(ctx_);
    Plaintext pt = decrypt(ct);
    const Plaintext ref = encoder.encode(expected, ct.level, ct.scale);
    pt.poly -= ref.poly;
    ring::ntt_inplace(pt.poly, Direction::inverse);
    long double max_noise = 1.0L;
    std::vector<std::uint64_t> residues(ct.level);
    for (std::size_t i = 0; i < ctx_->degree(); ++i) {
        for (std::size_t k = 0; k < ct.level; ++k) residues[k] = pt.poly.row(k)[i];
        max_noise = std::max(max_noise, std::fabs(centered_lift(*ctx_, ct.level, residues.data())));
    }
    double log_q = 0.0;
    for (std::size_t k = 0; k < ct.level; ++k) log_q += std::log2(static_cast<double>(ctx_->prime(k)));
    return log_q - 1.0 - static_cast<double>(std::log2(max_noise));
}

}  // namespace cryptwnn::ckks
