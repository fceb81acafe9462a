#pragma once

#include <stdexcept>
#include <string>

namespace ticketclass {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// validation/parse failures exit 2, runtime failures (divergence, transport)
// exit 3, usage problems exit 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: schema violations, duplicate keys, inconsistent labels.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed file contents (JSON, curation files, model containers).
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Matrix / model shape mismatches.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid configuration values (bounds, fold counts, GA parameters).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Network-level failure talking to the issue tracker. Retryable.
class TransportError : public Error {
public:
    using Error::Error;
};

// The remote tracker does not know the requested resource.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace ticketclass
