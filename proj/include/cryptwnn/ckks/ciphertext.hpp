/**
 * @file ciphertext.hpp
 * @brief Plaintext and ciphertext containers with level and scale metadata.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "cryptwnn/ckks/context.hpp"
#include "cryptwnn/ring/ring.hpp"

namespace cryptwnn::ckks {

/**
 * @brief Encoded polynomial, stored in NTT form over the data primes of its level.
 */
struct Plaintext {
    ring::RingElem poly;  ///< NTT representation, primes 0 .. level-1
    double scale = 0.0;
    std::size_t level = 0;
};

/**
 * @brief Ciphertext (c0, c1[, c2]) in NTT form; decrypts to c0 + c1 s + c2 s^2.
 */
struct Ciphertext {
    std::vector<ring::RingElem> parts;
    double scale = 0.0;
    std::size_t level = 0;

    std::size_t size() const noexcept { return parts.size(); }
};

}  // namespace cryptwnn::ckks
