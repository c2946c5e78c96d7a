/**
 * @file keys.hpp
 * @brief Secret, public and relinearisation keys.
 */
#pragma once

#include <array>
#include <vector>

#include "cryptwnn/ckks/context.hpp"
#include "cryptwnn/ring/ring.hpp"
#include "cryptwnn/ring/sampler.hpp"

namespace cryptwnn::ckks {

/// Ternary secret s in NTT form over every prime, special prime included.
struct SecretKey {
    ring::RingElem s;
};

/// (b, a) with b = -a s + e, NTT form over the data primes.
struct PublicKey {
    ring::RingElem b;
    ring::RingElem a;
};

/**
 * @brief Key-switching material for s^2, one RNS digit per data prime.
 *
 * Digit i is (b_i, a_i) over data primes plus the special prime P, with
 * b_i = -a_i s + e_i + [j == i] (P mod q_j) s^2 in row j.
 */
struct RelinKey {
    std::vector<std::array<ring::RingElem, 2>> digits;
};

/// All keys of one context. Only the key custodian should hold a KeySet.
struct KeySet {
    ContextPtr context;
    SecretKey secret;
    PublicKey pub;
    RelinKey relin;
};

KeySet keygen(const ContextPtr& ctx, ring::Prng& rng);

}  // namespace cryptwnn::ckks
