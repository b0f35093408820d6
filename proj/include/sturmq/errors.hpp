#pragma once

#include <stdexcept>
#include <string>

namespace sturmq {

/// Raised when an input violates an operation's preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative numerical method failed to converge, or a numerical
/// diagnostic (conditioning, normalization) crossed its threshold.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured size limit (amplitudes, symbolic entries) would be exceeded.
class LimitError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

} // namespace detail
} // namespace sturmq
