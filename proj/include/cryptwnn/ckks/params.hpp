/**
 * @file params.hpp
 * @brief CKKS parameter sets and named security profiles.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cryptwnn::ckks {

enum class SecurityProfile : std::uint8_t {
    secure = 0,         ///< Total modulus size respects the 128-bit RLWE table.
    test_insecure = 1,  ///< Explicitly requested; watermarked in serialized output.
};

std::string to_string(SecurityProfile profile);
SecurityProfile security_profile_from_string(const std::string& name);

/// Largest total modulus bit count for 128-bit classical security at degree N, if tabulated.
std::optional<int> max_secure_modulus_bits(std::size_t degree);

/**
 * @brief Ring degree, prime bit sizes and default scale.
 *
 * The last entry of coeff_modulus_bits is the key-switching special prime. The first
 * len - 1 entries are data primes, so a fresh ciphertext starts at level len - 1 and
 * supports len - 2 sequential multiplications.
 */
struct CkksParams {
    std::size_t poly_degree = 0;
    std::vector<int> coeff_modulus_bits;
    double scale = 0.0;
    SecurityProfile profile = SecurityProfile::test_insecure;

    std::size_t chain_length() const noexcept {
        return coeff_modulus_bits.empty() ? 0 : coeff_modulus_bits.size() - 1;
    }
    std::size_t max_depth() const noexcept { return chain_length() == 0 ? 0 : chain_length() - 1; }
    int total_modulus_bits() const noexcept;
    std::size_t slot_count() const noexcept { return poly_degree / 2; }

    /// Throws std::invalid_argument describing the first violated rule.
    void validate() const;

    /// N = 32768, [60, 40 x 11, 60], scale 2^40.
    static CkksParams secure_default();
    /// N = 8192, [60, 40 x 12, 60], scale 2^40. Deep enough for the training circuit.
    static CkksParams test_insecure_default();
    /// N = 8192, [60, 40 x 4, 60], scale 2^40. Small chain for fast scheme tests.
    static CkksParams unit_default();
    /// Lookup by name: "secure", "test-insecure" or "unit".
    static CkksParams from_profile_name(const std::string& name);

    friend bool operator==(const CkksParams&, const CkksParams&) = default;
};

}  // namespace cryptwnn::ckks
