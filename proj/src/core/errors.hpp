#pragma once

#include <stdexcept>
#include <string>

namespace cdpa {

/// Numerical blow-up during integration or training.  `index` is the step or
/// iteration at which the first non-finite value appeared.
struct DivergenceError : std::runtime_error {
    DivergenceError(long long index_, const std::string& what_)
        : std::runtime_error(what_), index(index_) {}
    long long index = 0;
};

/// Malformed or unreadable configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File-system level failure (unreadable file, unwritable directory).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cdpa
