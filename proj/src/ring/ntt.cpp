#include "cryptwnn/ring/ntt.hpp"

#include <bit>
#include <stdexcept>

namespace cryptwnn::ring {

std::size_t reverse_bits(std::size_t value, int bit_count) noexcept {
    std::size_t r = 0;
    for (int i = 0; i < bit_count; ++i) {
        r = (r << 1) | (value & 1);
        value >>= 1;
    }
    return r;
}

std::uint64_t find_primitive_root(std::size_t two_n, const Modulus& modulus) {
    const std::uint64_t q = modulus.value();
    if ((q - 1) % two_n != 0) {
        throw std::invalid_argument("modulus is not 1 mod 2N");
    }
    const std::uint64_t cofactor = (q - 1) / two_n;
    std::uint64_t best = 0;
    for (std::uint64_t g = 2; g < q; ++g) {
        const std::uint64_t cand = modulus.pow(g, cofactor);
        // Primitive iff cand^(2N/2) = -1.
        if (modulus.pow(cand, two_n / 2) == q - 1) {
            best = cand;
            break;
        }
    }
    if (best == 0) throw std::runtime_error("no primitive root found");
    // All primitive roots are odd powers of one another; pick the smallest.
    const std::uint64_t sq = modulus.mul(best, best);
    std::uint64_t cur = best;
    for (std::size_t i = 0; i < two_n / 2; ++i) {
        if (cur < best) best = cur;
        cur = modulus.mul(cur, sq);
    }
    return best;
}

NttTables::NttTables(std::size_t degree, const Modulus& modulus)
    : n_(degree), mod_(modulus) {
    if (degree < 2 || !std::has_single_bit(degree)) {
        throw std::invalid_argument("NTT degree must be a power of two >= 2");
    }
    psi_ = find_primitive_root(2 * degree, mod_);
    const std::uint64_t ipsi = mod_.inverse(psi_);
    const int logn = std::countr_zero(degree);
    psi_pows_.resize(n_);
    ipsi_pows_.resize(n_);
    psi_pows_shoup_.resize(n_);
    ipsi_pows_shoup_.resize(n_);
    std::uint64_t p = 1, ip = 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t r = reverse_bits(i, logn);
        psi_pows_[r] = p;
        ipsi_pows_[r] = ip;
        p = mod_.mul(p, psi_);
        ip = mod_.mul(ip, ipsi);
    }
    for (std::size_t i = 0; i < n_; ++i) {
        psi_pows_shoup_[i] = mod_.shoup(psi_pows_[i]);
        ipsi_pows_shoup_[i] = mod_.shoup(ipsi_pows_[i]);
    }
    n_inv_ = mod_.inverse(n_);
    n_inv_shoup_ = mod_.shoup(n_inv_);
}

void NttTables::forward(std::uint64_t* a) const {
    const std::uint64_t q = mod_.value();
    const std::uint64_t two_q = 2 * q;
    std::size_t t = n_;
    for (std::size_t m = 1; m < n_; m <<= 1) {
        t >>= 1;
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint64_t w = psi_pows_[m + i];
            const std::uint64_t wp = psi_pows_shoup_[m + i];
            std::uint64_t* x = a + 2 * i * t;
            std::uint64_t* y = x + t;
            for (std::size_t j = 0; j < t; ++j) {
                std::uint64_t u = x[j];
                if (u >= two_q) u -= two_q;
                const std::uint64_t v = mul_shoup_lazy(y[j], w, wp, q);
                x[j] = u + v;
                y[j] = u - v + two_q;
            }
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        std::uint64_t v = a[i];
        if (v >= two_q) v -= two_q;
        if (v >= q) v -= q;
        a[i] = v;
    }
}

void NttTables::inverse(std::uint64_t* a) const {
    const std::uint64_t q = mod_.value();
    const std::uint64_t two_q = 2 * q;
    std::size_t t = 1;
    for (std::size_t m = n_; m > 1; m >>= 1) {
        const std::size_t h = m >> 1;
        for (std::size_t i = 0; i < h; ++i) {
            const std::uint64_t w = ipsi_pows_[h + i];
            const std::uint64_t wp = ipsi_pows_shoup_[h + i];
            std::uint64_t* x = a + 2 * i * t;
            std::uint64_t* y = x + t;
            for (std::size_t j = 0; j < t; ++j) {
                const std::uint64_t u = x[j];
                const std::uint64_t v = y[j];
                std::uint64_t s = u + v;
                if (s >= two_q) s -= two_q;
                x[j] = s;
                y[j] = mul_shoup_lazy(u - v + two_q, w, wp, q);
            }
        }
        t <<= 1;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        a[i] = mul_shoup(a[i], n_inv_, n_inv_shoup_, q);
    }
}

}  // namespace cryptwnn::ring
