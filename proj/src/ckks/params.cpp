#include "cryptwnn/ckks/params.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cryptwnn::ckks {

std::string to_string(SecurityProfile profile) {
    return profile == SecurityProfile::secure ? "secure" : "test-insecure";
}

SecurityProfile security_profile_from_string(const std::string& name) {
    if (name == "secure") return SecurityProfile::secure;
    if (name == "test-insecure") return SecurityProfile::test_insecure;
    throw std::invalid_argument("unknown security profile '" + name + "'");
}

std::optional<int> max_secure_modulus_bits(std::size_t degree) {
    // HE standard, 128-bit classical security, ternary secret.
    switch (degree) {
        case 1024: return 27;
        case 2048: return 54;
        case 4096: return 109;
        case 8192: return 218;
        case 16384: return 438;
        case 32768: return 881;
        default: return std::nullopt;
    }
}

int CkksParams::total_modulus_bits() const noexcept {
    return std::accumulate(coeff_modulus_bits.begin(), coeff_modulus_bits.end(), 0);
}

void CkksParams::validate() const {
    if (poly_degree < 2 || !std::has_single_bit(poly_degree)) {
        throw std::invalid_argument("poly_degree must be a power of two");
    }
    if (coeff_modulus_bits.size() < 2) {
        throw std::invalid_argument("coeff_modulus_bits needs at least one data prime and the special prime");
    }
    for (int b : coeff_modulus_bits) {
        if (b < 20 || b > 60) throw std::invalid_argument("prime bit sizes must lie in [20, 60]");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive");
    int e = 0;
    if (std::frexp(scale, &e) != 0.5) throw std::invalid_argument("scale must be a power of two");
    if (std::log2(scale) >= coeff_modulus_bits.front()) {
        throw std::invalid_argument("scale must be smaller than the first prime");
    }
    if (profile == SecurityProfile::secure) {
        const auto limit = max_secure_modulus_bits(poly_degree);
        if (!limit) {
            throw std::invalid_argument("no 128-bit security bound tabulated for N = " +
                                        std::to_string(poly_degree));
        }
        if (total_modulus_bits() > *limit) {
            throw std::invalid_argument("total modulus of " + std::to_string(total_modulus_bits()) +
                                        " bits exceeds the 128-bit bound of " + std::to_string(*limit) +
                                        " bits for N = " + std::to_string(poly_degree));
        }
    }
}

namespace {

CkksParams make(std::size_t n, std::size_t middle, SecurityProfile profile) {
    CkksParams p;
    p.poly_degree = n;
    p.coeff_modulus_bits.push_back(60);
    for (std::size_t i = 0; i < middle; ++i) p.coeff_modulus_bits.push_back(40);
    p.coeff_modulus_bits.push_back(60);
    p.scale = std::ldexp(1.0, 40);
    p.profile = profile;
    return p;
}

}  // namespace

CkksParams CkksParams::secure_default() { return make(32768, 11, SecurityProfile::secure); }
CkksParams CkksParams::test_insecure_default() { return make(8192, 12, SecurityProfile::test_insecure); }
CkksParams CkksParams::unit_default() { return make(8192, 4, SecurityProfile::test_insecure); }

CkksParams CkksParams::from_profile_name(const std::string& name) {
    if (name == "secure") return secure_default();
    if (name == "test-insecure") return test_insecure_default();
    if (name == "unit") return unit_default();
    throw std::invalid_argument("unknown CKKS profile '" + name + "' (expected secure, test-insecure or unit)");
}

}  // namespace cryptwnn::ckks
