#pragma once

#include <stdexcept>
#include <string>

namespace ellchar {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid mathematical input (division by zero, non-square, wrong kind, ...).
struct DomainError : Error {
    using Error::Error;
};

// Working precision ran out before the result was determined.
struct PrecisionError : Error {
    using Error::Error;
};

// Bad run configuration (invalid prime, precision too low, kind mismatch).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace ellchar
