#pragma once

#include <stdexcept>
#include <string>

namespace purt {

/// Base class for all toolkit errors so callers can catch the whole family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file: bad header, bad cell syntax, bad date format.
struct SchemaError : Error {
    using Error::Error;
};

/// Structurally valid input that violates data rules (duplicates, empty
/// window intersections, unknown units).
struct DataError : Error {
    using Error::Error;
};

/// A computation was asked of a panel with missing cells.
struct UnbalancedError : Error {
    using Error::Error;
};

/// Series without enough variation or observations to estimate anything.
struct DegenerateInputError : Error {
    using Error::Error;
};

/// Rank-deficient regressor matrix. There is deliberately no pseudo-inverse
/// fallback; callers must see the failure.
struct SingularityError : Error {
    using Error::Error;
};

/// Bad run configuration (unknown keys, unknown test names, invalid values).
struct ConfigError : Error {
    using Error::Error;
};

/// Quantile-table cache problems: checksum mismatch, version mismatch,
/// unparseable file.
struct CacheError : Error {
    using Error::Error;
};

}  // namespace purt
