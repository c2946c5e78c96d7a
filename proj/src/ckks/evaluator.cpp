#include "cryptwnn/ckks/evaluator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cryptwnn/ckks/errors.hpp"

namespace cryptwnn::ckks {

using ring::Direction;
using ring::RingElem;
using ring::u128;

bool scales_match(double a, double b) noexcept {
    return std::fabs(a - b) <= kScaleTolerance * std::max(std::fabs(a), std::fabs(b));
}

namespace {

/// round(x / q_last) for an NTT-form element whose last row belongs to q_last.
RingElem divide_round_by_last(const CkksContext& ctx, const RingElem& x) {
    const std::size_t n = x.degree();
    const std::size_t k = x.prime_count();
    const std::size_t last_idx = x.moduli().back();
    const auto& q_last = ctx.modulus(last_idx);

    std::vector<std::uint64_t> last(x.row(k - 1), x.row(k - 1) + n);
    ctx.ring()->ntt(last_idx).inverse(last.data());
    const std::uint64_t half = q_last.value() >> 1;
    for (auto& v : last) v = q_last.add(v, half);

    RingElem out = ring::drop_last(x);
    std::vector<std::uint64_t> tmp(n);
    for (std::size_t j = 0; j + 1 < k; ++j) {
        const std::size_t idx = x.moduli()[j];
        const auto& qj = ctx.modulus(idx);
        const std::uint64_t half_j = qj.reduce(half);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = qj.sub(qj.reduce(last[i]), half_j);
        ctx.ring()->ntt(idx).forward(tmp.data());
        const std::uint64_t inv = ctx.inv_mod(last_idx, idx);
        const std::uint64_t inv_shoup = qj.shoup(inv);
        std::uint64_t* row = out.row(j);
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = ring::mul_shoup(qj.sub(row[i], tmp[i]), inv, inv_shoup, qj.value());
        }
    }
    return out;
}

RingElem first_rows(const RingElem& src, std::size_t count, std::vector<std::size_t> moduli) {
    RingElem out(src.params(), std::move(moduli), src.representation());
    std::copy(src.data().begin(), src.data().begin() + static_cast<std::ptrdiff_t>(count * src.degree()),
              out.data().begin());
    return out;
}

}  // namespace

Evaluator::Evaluator(ContextPtr ctx, std::optional<RelinKey> rlk)
    : ctx_(std::move(ctx)), rlk_(std::move(rlk)), encoder_(ctx_) {}

void Evaluator::require_aligned(const Ciphertext& a, const Ciphertext& b, const char* op) const {
    if (a.level != b.level) {
        throw AlignmentError(std::string(op) + ": level mismatch (" + std::to_string(a.level) + " vs " +
                             std::to_string(b.level) + ")");
    }
    if (!scales_match(a.scale, b.scale)) {
        throw AlignmentError(std::string(op) + ": scale mismatch (2^" + std::to_string(std::log2(a.scale)) +
                             " vs 2^" + std::to_string(std::log2(b.scale)) + ")");
    }
}

void Evaluator::require_relin_key() const {
    if (!rlk_) throw std::logic_error("evaluator has no relinearization key");
}

Ciphertext Evaluator::add(const Ciphertext& a, const Ciphertext& b) const {
    Ciphertext r = a;
    add_inplace(r, b);
    return r;
}

void Evaluator::add_inplace(Ciphertext& acc, const Ciphertext& b) const {
    require_aligned(acc, b, "add");
    if (acc.size() < b.size()) acc.parts.resize(b.size(), RingElem(ctx_->ring(), ctx_->level_moduli(acc.level),
                                                                     ring::Representation::ntt));
    for (std::size_t i = 0; i < b.size(); ++i) acc.parts[i] += b.parts[i];
}

Ciphertext Evaluator::sub(const Ciphertext& a, const Ciphertext& b) const {
    return add(a, negate(b));
}

Ciphertext Evaluator::negate(const Ciphertext& a) const {
    Ciphertext r = a;
    for (auto& p : r.parts) p = ring::negate(p);
    return r;
}

Ciphertext Evaluator::add_plain(const Ciphertext& a, const Plaintext& b) const {
    if (a.level != b.level) throw AlignmentError("add_plain: level mismatch");
    if (!scales_match(a.scale, b.scale)) throw AlignmentError("add_plain: scale mismatch");
    Ciphertext r = a;
    r.parts[0] += b.poly;
    return r;
}

Ciphertext Evaluator::add_constant(const Ciphertext& a, double value) const {
    return add_plain(a, encoder_.encode(value, a.level, a.scale));
}

Ciphertext Evaluator::multiply_integer(const Ciphertext& a, std::int64_t k) const {
    Ciphertext r = a;
    std::vector<std::uint64_t> scalars(a.level);
    for (std::size_t i = 0; i < a.level; ++i) scalars[i] = ctx_->modulus(i).from_signed(k);
    for (auto& p : r.parts) p.multiply_scalar(scalars);
    return r;
}

Ciphertext Evaluator::tensor(const Ciphertext& a, const Ciphertext& b) const {
    if (a.level != b.level) throw AlignmentError("multiply: level mismatch");
    if (a.size() != 2 || b.size() != 2) throw std::invalid_argument("multiply expects size-2 inputs");
    Ciphertext r;
    r.level = a.level;
    r.scale = a.scale * b.scale;
    RingElem c0 = a.parts[0];
    c0 *= b.parts[0];
    RingElem c1 = a.parts[0];
    c1 *= b.parts[1];
    RingElem t = a.parts[1];
    t *= b.parts[0];
    c1 += t;
    RingElem c2 = a.parts[1];
    c2 *= b.parts[1];
    r.parts = {std::move(c0), std::move(c1), std::move(c2)};
    return r;
}

Ciphertext Evaluator::relinearize(const Ciphertext& a) const {
    if (a.size() == 2) return a;
    if (a.size() != 3) throw std::invalid_argument("relinearize expects a size-3 ciphertext");
    require_relin_key();
    const std::size_t level = a.level;
    const std::size_t n = ctx_->degree();
    const std::size_t special = ctx_->special_index();
    const auto ext = ctx_->extended_moduli(level);

    RingElem c2 = a.parts[2];
    ring::ntt_inplace(c2, Direction::inverse);

    // Accumulators over the level's data primes followed by the special prime.
    std::vector<u128> acc0((level + 1) * n, 0), acc1((level + 1) * n, 0);
    std::vector<std::uint64_t> digit(n);
    for (std::size_t i = 0; i < level; ++i) {
        const auto& key = rlk_->digits.at(i);
        const std::uint64_t* d = c2.row(i);
        for (std::size_t t = 0; t <= level; ++t) {
            const std::size_t idx = t < level ? t : special;
            const std::uint64_t* src;
            if (idx == i) {
                src = a.parts[2].row(i);
            } else {
                const auto& q = ctx_->modulus(idx);
                for (std::size_t c = 0; c < n; ++c) digit[c] = q.reduce(d[c]);
                ctx_->ring()->ntt(idx).forward(digit.data());
                src = digit.data();
            }
            // Key rows are stored over all data primes plus the special prime.
            const std::size_t key_row = t < level ? t : key[0].prime_count() - 1;
            const std::uint64_t* k0 = key[0].row(key_row);
            const std::uint64_t* k1 = key[1].row(key_row);
            u128* o0 = acc0.data() + t * n;
            u128* o1 = acc1.data() + t * n;
            for (std::size_t c = 0; c < n; ++c) {
                o0[c] += static_cast<u128>(src[c]) * k0[c];
                o1[c] += static_cast<u128>(src[c]) * k1[c];
            }
        }
    }
    RingElem ks0(ctx_->ring(), ext, ring::Representation::ntt);
    RingElem ks1(ctx_->ring(), ext, ring::Representation::ntt);
    for (std::size_t t = 0; t <= level; ++t) {
        const auto& q = ctx_->modulus(ext[t]);
        for (std::size_t c = 0; c < n; ++c) {
            ks0.row(t)[c] = q.reduce(acc0[t * n + c]);
            ks1.row(t)[c] = q.reduce(acc1[t * n + c]);
        }
    }
    Ciphertext r;
    r.level = level;
    r.scale = a.scale;
    r.parts = {a.parts[0], a.parts[1]};
    r.parts[0] += divide_round_by_last(*ctx_, ks0);
    r.parts[1] += divide_round_by_last(*ctx_, ks1);
    return r;
}

Ciphertext Evaluator::rescale(const Ciphertext& a) const {
    if (a.level < 2) {
        throw DepthError("rescale at level 1: modulus chain exhausted (chain length " +
                         std::to_string(ctx_->top_level()) + ")");
    }
    Ciphertext r;
    r.level = a.level - 1;
    r.scale = a.scale / static_cast<double>(ctx_->prime(a.level - 1));
    for (const auto& p : a.parts) r.parts.push_back(divide_round_by_last(*ctx_, p));
    return r;
}

Ciphertext Evaluator::multiply(const Ciphertext& a, const Ciphertext& b) const {
    if (a.level < 2) {
        throw DepthError("multiply at level 1: the circuit exceeds the multiplicative depth " +
                         std::to_string(ctx_->params().max_depth()));
    }
    return rescale(relinearize(tensor(a, b)));
}

Ciphertext Evaluator::multiply_plain(const Ciphertext& a, const Plaintext& b) const {
    if (a.level != b.level) throw AlignmentError("multiply_plain: level mismatch");
    if (a.level < 2) {
        throw DepthError("multiply at level 1: the circuit exceeds the multiplicative depth " +
                         std::to_string(ctx_->params().max_depth()));
    }
    Ciphertext r = a;
    for (auto& p : r.parts) p *= b.poly;
    r.scale = a.scale * b.scale;
    return rescale(r);
}

Ciphertext Evaluator::multiply_constant(const Ciphertext& a, double value,
                                        std::optional<double> result_scale) const {
    if (a.level < 2) {
        throw DepthError("constant multiply at level 1: the circuit exceeds the multiplicative depth " +
                         std::to_string(ctx_->params().max_depth()));
    }
    const double q = static_cast<double>(ctx_->prime(a.level - 1));
    const double target = result_scale.value_or(a.scale);
    const double pt_scale = target * q / a.scale;
    Ciphertext r = multiply_plain(a, encoder_.encode(value, a.level, pt_scale));
    r.scale = target;
    return r;
}

Ciphertext Evaluator::mod_switch_to(const Ciphertext& a, std::size_t level) const {
    if (level == a.level) return a;
    if (level == 0 || level > a.level) {
        throw DepthError("cannot mod-switch from level " + std::to_string(a.level) + " to level " +
                         std::to_string(level));
    }
    Ciphertext r;
    r.level = level;
    r.scale = a.scale;
    for (const auto& p : a.parts) r.parts.push_back(first_rows(p, level, ctx_->level_moduli(level)));
    return r;
}

Ciphertext Evaluator::align(const Ciphertext& a, std::size_t level, double scale) const {
    if (level >= a.level) {
        throw DepthError("align needs a strictly lower target level (have " + std::to_string(a.level) +
                         ", want " + std::to_string(level) + ")");
    }
    return multiply_constant(mod_switch_to(a, level + 1), 1.0, scale);
}

Ciphertext Evaluator::inner_product(const std::vector<const Ciphertext*>& a,
                                    const std::vector<const Ciphertext*>& b) const {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("inner_product needs equal, nonempty operand lists");
    }
    ProductAccumulator acc(*this);
    for (std::size_t i = 0; i < a.size(); ++i) acc.add_product(*a[i], *b[i]);
    return acc.finish();
}

void ProductAccumulator::add_product(const Ciphertext& a, const Ciphertext& b) {
    Ciphertext t = eval_->tensor(a, b);
    if (!acc_) {
        acc_ = std::move(t);
    } else {
        eval_->add_inplace(*acc_, t);
    }
}

Ciphertext ProductAccumulator::finish() const {
    if (!acc_) throw std::logic_error("no products accumulated");
    if (acc_->level < 2) {
        throw DepthError("multiply at level 1: the circuit exceeds the multiplicative depth");
    }
    return eval_->rescale(eval_->relinearize(*acc_));
}

}  // namespace cryptwnn::ckks
