#pragma once

#include <stdexcept>
#include <string>

namespace bmn {

// Root of everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, bad configuration, or a formula evaluated outside its domain.
struct UsageError : Error {
    using Error::Error;
};

struct NonIntegerDimension : UsageError {
    using UsageError::UsageError;
};

struct InvalidXi : UsageError {
    using UsageError::UsageError;
};

struct DimensionMismatch : UsageError {
    using UsageError::UsageError;
};

struct BatchMismatch : UsageError {
    using UsageError::UsageError;
};

struct DomainError : UsageError {
    using UsageError::UsageError;
};

struct ConfigError : UsageError {
    using UsageError::UsageError;
};

// Numerical breakdown at runtime, as opposed to a caller mistake.
struct NumericError : Error {
    using Error::Error;
};

struct SingularGram : NumericError {
    using NumericError::NumericError;
};

struct DegenerateProjection : NumericError {
    using NumericError::NumericError;
};

}  // namespace bmn
