#pragma once

#include <stdexcept>
#include <string>

namespace suco {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API misuse: mismatched lengths, out-of-range indices.
struct ContractError : Error {
    using Error::Error;
};

// Invalid user-supplied parameters (cluster counts, ratios, subspace counts).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed input file (vecs records, truncation, bad dimensions).
struct FormatError : Error {
    using Error::Error;
};

// Index file fails validation: bad magic, version, truncated or
// inconsistent section. The message names the failing section.
struct CorruptIndexError : FormatError {
    using FormatError::FormatError;
};

// Index and dataset disagree (n or d mismatch).
struct IncompatibilityError : Error {
    using Error::Error;
};

}  // namespace suco
