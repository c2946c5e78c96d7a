#pragma once

#include <stdexcept>
#include <string>

namespace cryptwnn::ckks {

/// The circuit needs more levels than the modulus chain provides.
class DepthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands differ in level or scale; the caller must align them first.
class AlignmentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed, truncated or corrupted serialized data.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Serialized object belongs to a different parameter set.
class ContextMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cryptwnn::ckks
