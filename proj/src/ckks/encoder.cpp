#include "cryptwnn/ckks/encoder.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cryptwnn::ckks {

namespace {

void bit_reverse(std::vector<std::complex<double>>& vals) {
    const std::size_t n = vals.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j >= bit; bit >>= 1) j -= bit;
        j += bit;
        if (i < j) std::swap(vals[i], vals[j]);
    }
}

double log2_modulus(const CkksContext& ctx, std::size_t level) {
    double bits = 0.0;
    for (std::size_t i = 0; i < level; ++i) bits += std::log2(static_cast<double>(ctx.prime(i)));
    return bits;
}

}  // namespace

Encoder::Encoder(ContextPtr ctx) : ctx_(std::move(ctx)) {
    if (!ctx_) throw std::invalid_argument("encoder needs a context");
}

std::size_t Encoder::padded_slots(std::size_t n) {
    return n <= 1 ? 1 : std::bit_ceil(n);
}

void Encoder::fft_special(std::vector<std::complex<double>>& vals) const {
    const std::size_t size = vals.size();
    const std::size_t m = 2 * ctx_->degree();
    const auto& rot = ctx_->rot_group();
    const auto& ksi = ctx_->ksi_pows();
    bit_reverse(vals);
    for (std::size_t len = 2; len <= size; len <<= 1) {
        const std::size_t lenh = len >> 1, lenq = len << 2;
        for (std::size_t i = 0; i < size; i += len) {
            for (std::size_t j = 0; j < lenh; ++j) {
                const std::size_t idx = (rot[j] % lenq) * (m / lenq);
                const std::complex<double> u = vals[i + j];
                const std::complex<double> v = vals[i + j + lenh] * ksi[idx];
                vals[i + j] = u + v;
                vals[i + j + lenh] = u - v;
            }
        }
    }
}

void Encoder::fft_special_inv(std::vector<std::complex<double>>& vals) const {
    const std::size_t size = vals.size();
    const std::size_t m = 2 * ctx_->degree();
    const auto& rot = ctx_->rot_group();
    const auto& ksi = ctx_->ksi_pows();
    for (std::size_t len = size; len >= 1; len >>= 1) {
        const std::size_t lenh = len >> 1, lenq = len << 2;
        for (std::size_t i = 0; i < size; i += len) {
            for (std::size_t j = 0; j < lenh; ++j) {
                const std::size_t idx = (lenq - (rot[j] % lenq)) * (m / lenq);
                const std::complex<double> u = vals[i + j] + vals[i + j + lenh];
                const std::complex<double> v = (vals[i + j] - vals[i + j + lenh]) * ksi[idx];
                vals[i + j] = u;
                vals[i + j + lenh] = v;
            }
        }
    }
    bit_reverse(vals);
    for (auto& v : vals) v /= static_cast<double>(size);
}

std::vector<double> Encoder::unrounded_coefficients(std::span<const double> values) const {
    const std::size_t n = ctx_->degree(), nh = n / 2;
    if (values.size() > nh) throw std::length_error("too many values for the slot capacity");
    const std::size_t slots = padded_slots(values.size());
    const std::size_t gap = nh / slots;
    std::vector<std::complex<double>> u(slots, {0.0, 0.0});
    for (std::size_t i = 0; i < values.size(); ++i) u[i] = {values[i], 0.0};
    fft_special_inv(u);
    std::vector<double> coeffs(n, 0.0);
    for (std::size_t i = 0; i < slots; ++i) {
        coeffs[i * gap] = u[i].real();
        coeffs[nh + i * gap] = u[i].imag();
    }
    return coeffs;
}

Plaintext Encoder::encode(std::span<const double> values, std::size_t level, double scale) const {
    if (level == 0 || level > ctx_->top_level()) {
        throw std::out_of_range("encode level " + std::to_string(level) + " outside chain of length " +
                                std::to_string(ctx_->top_level()));
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("encode scale must be positive");
    if (values.size() > ctx_->degree() / 2) {
        throw std::length_error("cannot encode " + std::to_string(values.size()) + " values into " +
                                std::to_string(ctx_->degree() / 2) + " slots");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::range_error("cannot encode a non-finite value");
    }
    if (values.size() <= 1) return encode(values.empty() ? 0.0 : values[0], level, scale);

    const std::vector<double> real = unrounded_coefficients(values);
    const std::size_t n = ctx_->degree();
    std::vector<double> rounded(n);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rounded[i] = std::round(real[i] * scale);
        max_abs = std::max(max_abs, std::fabs(rounded[i]));
    }
    if (max_abs > 0.0 && std::log2(max_abs) + 1.0 >= log2_modulus(*ctx_, level)) {
        throw std::range_error("encoded magnitude exceeds the modulus at level " + std::to_string(level));
    }
    Plaintext pt{ring::RingElem(ctx_->ring(), ctx_->level_moduli(level)), scale, level};
    for (std::size_t k = 0; k < level; ++k) {
        const auto& q = ctx_->modulus(k);
        std::uint64_t* row = pt.poly.row(k);
        for (std::size_t i = 0; i < n; ++i) row[i] = reduce_integral(rounded[i], q);
    }
    ring::ntt_inplace(pt.poly, ring::Direction::forward);
    return pt;
}

Plaintext Encoder::encode(double value, std::size_t level, double scale) const {
    if (level == 0 || level > ctx_->top_level()) {
        throw std::out_of_range("encode level " + std::to_string(level) + " outside chain of length " +
                                std::to_string(ctx_->top_level()));
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("encode scale must be positive");
    if (!std::isfinite(value)) throw std::range_error("cannot encode a non-finite value");
    const double c = std::round(value * scale);
    if (c != 0.0 && std::log2(std::fabs(c)) + 1.0 >= log2_modulus(*ctx_, level)) {
        throw std::range_error("encoded magnitude exceeds the modulus at level " + std::to_string(level));
    }
    // A constant polynomial has the same value in every NTT slot.
    Plaintext pt{ring::RingElem(ctx_->ring(), ctx_->level_moduli(level), ring::Representation::ntt), scale,
                 level};
    const std::size_t n = ctx_->degree();
    for (std::size_t k = 0; k < level; ++k) {
        const std::uint64_t r = reduce_integral(c, ctx_->modulus(k));
        std::fill(pt.poly.row(k), pt.poly.row(k) + n, r);
    }
    return pt;
}

std::vector<double> Encoder::decode(const Plaintext& pt, std::size_t count) const {
    if (!(pt.scale > 0.0) || !std::isfinite(pt.scale)) {
        throw std::runtime_error("corrupt plaintext: recorded scale is not positive");
    }
    const std::size_t n = ctx_->degree(), nh = n / 2;
    if (count == 0 || count > nh) throw std::length_error("decode count outside slot capacity");
    if (pt.level == 0 || pt.poly.prime_count() != pt.level) {
        throw std::runtime_error("corrupt plaintext: level does not match its prime count");
    }
    ring::RingElem coeffs = pt.poly;
    if (coeffs.representation() == ring::Representation::ntt) {
        ring::ntt_inplace(coeffs, ring::Direction::inverse);
    }
    const std::size_t slots = padded_slots(count);
    const std::size_t gap = nh / slots;
    std::vector<std::uint64_t> residues(pt.level);
    auto lift = [&](std::size_t idx) {
        for (std::size_t k = 0; k < pt.level; ++k) residues[k] = coeffs.row(k)[idx];
        return static_cast<double>(centered_lift(*ctx_, pt.level, residues.data()) /
                                   static_cast<long double>(pt.scale));
    };
    std::vector<std::complex<double>> vals(slots);
    for (std::size_t i = 0; i < slots; ++i) vals[i] = {lift(i * gap), lift(nh + i * gap)};
    fft_special(vals);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = vals[i].real();
    return out;
}

}  // namespace cryptwnn::ckks
