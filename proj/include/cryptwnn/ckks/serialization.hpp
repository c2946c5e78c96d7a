/**
 * @file serialization.hpp
 * @brief Binary container format for parameters, keys and ciphertexts.
 *
 * Layout (little-endian):
 *   magic "CWNNCKKS" (8 bytes) | version u16 | object tag u8 | params hash (32 bytes) |
 *   insecure watermark u8 | payload length u64 | payload | CRC-32 of all preceding bytes (u32)
 *
 * Payloads:
 *   params      N u64, prime count u32, bit sizes i32[], scale f64, profile u8
 *   ring elem   prime count u32, prime indices u32[], representation u8, residues u64[count * N]
 *   ciphertext  level u32, scale f64, part count u8, ring elem[]
 *   secret key  ring elem
 *   public key  ring elem b, ring elem a
 *   relin key   digit count u32, (ring elem b, ring elem a)[]
 *   key set     secret key, public key, relin key payloads in order
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cryptwnn/ckks/ciphertext.hpp"
#include "cryptwnn/ckks/context.hpp"
#include "cryptwnn/ckks/keys.hpp"

namespace cryptwnn::ckks {

inline constexpr std::uint16_t kFormatVersion = 1;

enum class ObjectTag : std::uint8_t {
    params = 1,
    ciphertext = 2,
    secret_key = 3,
    public_key = 4,
    relin_key = 5,
    key_set = 6,
};

struct Header {
    std::uint16_t version = 0;
    ObjectTag tag = ObjectTag::params;
    ParamsHash params_hash{};
    bool insecure = false;
    std::uint64_t payload_length = 0;
};

/// Validate framing and checksum; throws FormatError.
Header read_header(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_params(const CkksContext& ctx);
/// Rebuilds the parameters and checks that their hash matches the header.
CkksParams deserialize_params(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const CkksContext& ctx, const Ciphertext& ct);
std::vector<std::uint8_t> serialize(const CkksContext& ctx, const SecretKey& sk);
std::vector<std::uint8_t> serialize(const CkksContext& ctx, const PublicKey& pk);
std::vector<std::uint8_t> serialize(const CkksContext& ctx, const RelinKey& rlk);
std::vector<std::uint8_t> serialize(const KeySet& keys);

/// Each loader throws FormatError for corrupt input and ContextMismatchError for a foreign hash.
Ciphertext deserialize_ciphertext(const ContextPtr& ctx, std::span<const std::uint8_t> bytes);
SecretKey deserialize_secret_key(const ContextPtr& ctx, std::span<const std::uint8_t> bytes);
PublicKey deserialize_public_key(const ContextPtr& ctx, std::span<const std::uint8_t> bytes);
RelinKey deserialize_relin_key(const ContextPtr& ctx, std::span<const std::uint8_t> bytes);
KeySet deserialize_key_set(const ContextPtr& ctx, std::span<const std::uint8_t> bytes);

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

}  // namespace cryptwnn::ckks
