#include "cryptwnn/ring/sampler.hpp"

#include <sodium.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace cryptwnn::ring {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

Prng::Prng(std::uint64_t seed) {
    ensure_sodium();
    // Key = seed bytes followed by a fixed domain tag.
    for (int i = 0; i < 8; ++i) key_[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    static constexpr char kTag[] = "cryptwnn-prng-v1";
    std::memcpy(key_.data() + 8, kTag, sizeof(kTag) - 1);
}

Prng Prng::from_entropy() {
    ensure_sodium();
    std::uint64_t seed = 0;
    randombytes_buf(&seed, sizeof(seed));
    Prng p(seed);
    randombytes_buf(p.key_.data(), p.key_.size());
    return p;
}

void Prng::refill() {
    std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
    for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(nonce_ >> (8 * i));
    ++nonce_;
    crypto_stream_chacha20_ietf(buffer_.data(), buffer_.size(), nonce.data(), key_.data());
    pos_ = 0;
}

void Prng::fill(std::uint8_t* out, std::size_t len) {
    while (len > 0) {
        if (pos_ == buffer_.size()) refill();
        const std::size_t take = std::min(len, buffer_.size() - pos_);
        std::memcpy(out, buffer_.data() + pos_, take);
        pos_ += take;
        out += take;
        len -= take;
    }
}

std::uint64_t Prng::next_u64() {
    std::uint8_t b[8];
    fill(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint64_t Prng::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below needs a positive bound");
    if (bound == 1) return 0;
    const int bits = std::bit_width(bound - 1);
    const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
        const std::uint64_t v = next_u64() & mask;
        if (v < bound) return v;
    }
}

double Prng::uniform_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::uniform_open() {
    for (;;) {
        const double u = uniform_unit();
        if (u > 0.0) return u;
    }
}

Prng Prng::split() {
    Prng child(0);
    fill(child.key_.data(), child.key_.size());
    return child;
}

std::vector<std::int64_t> sample_ternary_coeffs(std::size_t n, Prng& rng) {
    std::vector<std::int64_t> out(n);
    for (auto& c : out) c = static_cast<std::int64_t>(rng.uniform_below(3)) - 1;
    return out;
}

std::vector<std::int64_t> sample_gaussian_coeffs(std::size_t n, Prng& rng, double sigma) {
    const double bound = kErrorTailCut * sigma;
    std::vector<std::int64_t> out(n);
    std::size_t i = 0;
    while (i < n) {
        // Box-Muller yields two independent normals per draw.
        const double u1 = rng.uniform_open();
        const double u2 = rng.uniform_unit();
        const double r = std::sqrt(-2.0 * std::log(u1)) * sigma;
        const double z[2] = {r * std::cos(2.0 * std::numbers::pi * u2),
                             r * std::sin(2.0 * std::numbers::pi * u2)};
        for (double v : z) {
            const double rounded = std::round(v);
            if (std::abs(rounded) > bound || i >= n) continue;
            out[i++] = static_cast<std::int64_t>(rounded);
        }
    }
    return out;
}

RingElem sample(SampleKind kind, const RingParamsPtr& params, const std::vector<std::size_t>& moduli,
                Prng& rng) {
    const std::size_t n = params->degree();
    switch (kind) {
        case SampleKind::ternary: {
            const auto c = sample_ternary_coeffs(n, rng);
            return RingElem::from_signed(params, moduli, c);
        }
        case SampleKind::gaussian: {
            const auto c = sample_gaussian_coeffs(n, rng);
            return RingElem::from_signed(params, moduli, c);
        }
        case SampleKind::uniform: {
            RingElem out(params, moduli);
            for (std::size_t k = 0; k < moduli.size(); ++k) {
                const std::uint64_t q = out.modulus_of(k).value();
                std::uint64_t* row = out.row(k);
                for (std::size_t i = 0; i < n; ++i) row[i] = rng.uniform_below(q);
            }
            return out;
        }
    }
    throw std::invalid_argument("unknown sample kind");
}

}  // namespace cryptwnn::ring
