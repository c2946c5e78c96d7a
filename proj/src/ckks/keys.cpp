#include "cryptwnn/ckks/keys.hpp"

#include <stdexcept>

namespace cryptwnn::ckks {

using ring::Direction;
using ring::RingElem;
using ring::SampleKind;

namespace {

RingElem sample_ntt(SampleKind kind, const CkksContext& ctx, const std::vector<std::size_t>& moduli,
                    ring::Prng& rng) {
    RingElem e = ring::sample(kind, ctx.ring(), moduli, rng);
    if (kind == SampleKind::uniform) {
        // Uniform residues are uniform in either domain.
        e.set_representation(ring::Representation::ntt);
    } else {
        ring::ntt_inplace(e, Direction::forward);
    }
    return e;
}

RingElem restrict_rows(const RingElem& src, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& moduli) {
    RingElem out(src.params(), moduli, src.representation());
    const std::size_t n = src.degree();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::copy(src.row(rows[k]), src.row(rows[k]) + n, out.row(k));
    }
    return out;
}

}  // namespace

KeySet keygen(const ContextPtr& ctx, ring::Prng& rng) {
    if (!ctx) throw std::invalid_argument("keygen needs a context");
    const std::size_t top = ctx->top_level();
    const auto ext = ctx->extended_moduli(top);
    const auto data = ctx->level_moduli(top);

    KeySet keys;
    keys.context = ctx;
    keys.secret.s = sample_ntt(SampleKind::ternary, *ctx, ext, rng);

    std::vector<std::size_t> data_rows(top);
    for (std::size_t i = 0; i < top; ++i) data_rows[i] = i;
    const RingElem s_data = restrict_rows(keys.secret.s, data_rows, data);

    keys.pub.a = sample_ntt(SampleKind::uniform, *ctx, data, rng);
    RingElem e = sample_ntt(SampleKind::gaussian, *ctx, data, rng);
    RingElem as = keys.pub.a;
    as *= s_data;
    keys.pub.b = ring::sub(e, as);

    RingElem s2 = keys.secret.s;
    s2 *= keys.secret.s;
    const std::size_t n = ctx->degree();
    const std::uint64_t special = ctx->prime(ctx->special_index());
    keys.relin.digits.reserve(top);
    for (std::size_t i = 0; i < top; ++i) {
        RingElem a = sample_ntt(SampleKind::uniform, *ctx, ext, rng);
        RingElem b = sample_ntt(SampleKind::gaussian, *ctx, ext, rng);
        RingElem as_i = a;
        as_i *= keys.secret.s;
        b -= as_i;
        const auto& qi = ctx->modulus(i);
        const std::uint64_t p_mod = qi.reduce(special);
        const std::uint64_t p_shoup = qi.shoup(p_mod);
        std::uint64_t* row = b.row(i);
        const std::uint64_t* s2row = s2.row(i);
        for (std::size_t c = 0; c < n; ++c) {
            row[c] = qi.add(row[c], ring::mul_shoup(s2row[c], p_mod, p_shoup, qi.value()));
        }
        keys.relin.digits.push_back({std::move(b), std::move(a)});
    }
    return keys;
}

}  // namespace cryptwnn::ckks
