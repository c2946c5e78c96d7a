#include "cryptwnn/ckks/context.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "cryptwnn/ring/modulus.hpp"

namespace cryptwnn::ckks {

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

CkksContext::CkksContext(const CkksParams& params) : params_(params) {
    params_.validate();
    data_primes_ = params_.chain_length();
    const auto primes = ring::generate_ntt_primes(params_.poly_degree, params_.coeff_modulus_bits);
    ring_ = ring::RingParams::create(params_.poly_degree, primes);

    const std::size_t k = primes.size();
    inv_table_.assign(k * k, 0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            if (a != b) inv_table_[a * k + b] = ring_->modulus(b).inverse(primes[a] % primes[b]);
        }
    }

    half_digits_.resize(data_primes_ + 1);
    for (std::size_t level = 1; level <= data_primes_; ++level) {
        // (Q - 1) / 2 = -(2^-1) mod each q_i.
        std::vector<std::uint64_t> residues(level), digits(level);
        for (std::size_t i = 0; i < level; ++i) {
            const auto& q = ring_->modulus(i);
            residues[i] = q.negate(q.inverse(2));
        }
        garner_digits(*this, level, residues.data(), digits.data());
        half_digits_[level] = std::move(digits);
    }

    const std::size_t m = 2 * params_.poly_degree;
    rot_group_.resize(params_.poly_degree / 2);
    std::size_t five = 1;
    for (auto& r : rot_group_) {
        r = five;
        five = five * 5 % m;
    }
    ksi_pows_.resize(m + 1);
    for (std::size_t j = 0; j < m; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        ksi_pows_[j] = {std::cos(angle), std::sin(angle)};
    }
    ksi_pows_[m] = ksi_pows_[0];

    std::vector<std::uint8_t> canon;
    const char tag[] = "cryptwnn-ckks-params";
    canon.insert(canon.end(), tag, tag + sizeof(tag) - 1);
    put_u64(canon, params_.poly_degree);
    put_u64(canon, primes.size());
    for (auto p : primes) put_u64(canon, p);
    std::uint64_t scale_bits = 0;
    static_assert(sizeof(scale_bits) == sizeof(params_.scale));
    std::memcpy(&scale_bits, &params_.scale, sizeof(scale_bits));
    put_u64(canon, scale_bits);
    canon.push_back(static_cast<std::uint8_t>(params_.profile));
    SHA256(canon.data(), canon.size(), hash_.data());
}

std::shared_ptr<const CkksContext> CkksContext::create(const CkksParams& params) {
    return std::shared_ptr<const CkksContext>(new CkksContext(params));
}

std::vector<std::size_t> CkksContext::level_moduli(std::size_t level) const {
    if (level == 0 || level > data_primes_) throw std::out_of_range("level outside the modulus chain");
    std::vector<std::size_t> m(level);
    for (std::size_t i = 0; i < level; ++i) m[i] = i;
    return m;
}

std::vector<std::size_t> CkksContext::extended_moduli(std::size_t level) const {
    auto m = level_moduli(level);
    m.push_back(special_index());
    return m;
}

void garner_digits(const CkksContext& ctx, std::size_t level, const std::uint64_t* residues,
                   std::uint64_t* digits) {
    for (std::size_t i = 0; i < level; ++i) {
        const auto& qi = ctx.modulus(i);
        std::uint64_t t = residues[i];
        for (std::size_t k = 0; k < i; ++k) {
            t = qi.mul(qi.sub(t, qi.reduce(digits[k])), ctx.inv_mod(k, i));
        }
        digits[i] = t;
    }
}

long double centered_lift(const CkksContext& ctx, std::size_t level, const std::uint64_t* residues) {
    std::uint64_t digits[64];
    if (level > 64) throw std::invalid_argument("modulus chain too long for centered lift");
    garner_digits(ctx, level, residues, digits);
    const auto& half = ctx.half_modulus_digits(level);
    bool negative = false;
    for (std::size_t i = level; i-- > 0;) {
        if (digits[i] != half[i]) {
            negative = digits[i] > half[i];
            break;
        }
    }
    if (negative) {
        std::uint64_t neg[64] = {};
        for (std::size_t i = 0; i < level; ++i) neg[i] = ctx.modulus(i).negate(residues[i]);
        garner_digits(ctx, level, neg, digits);
    }
    long double v = 0.0L;
    for (std::size_t i = level; i-- > 0;) {
        v = v * static_cast<long double>(ctx.prime(i)) + static_cast<long double>(digits[i]);
    }
    return negative ? -v : v;
}

std::uint64_t reduce_integral(double value, const ring::Modulus& q) {
    const bool negative = value < 0;
    double mag = std::fabs(value);
    std::uint64_t r;
    if (mag < 0x1p63) {
        r = q.reduce(static_cast<std::uint64_t>(mag));
    } else {
        int exp = 0;
        const double frac = std::frexp(mag, &exp);  // mag = frac * 2^exp, frac in [0.5, 1)
        const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
        r = q.mul(q.reduce(mant), q.pow(2, static_cast<std::uint64_t>(exp - 53)));
    }
    return negative ? q.negate(r) : r;
}

}  // namespace cryptwnn::ckks
