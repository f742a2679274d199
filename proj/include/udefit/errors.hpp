#pragma once

#include <stdexcept>
#include <string>

namespace udefit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad model/window/fit settings, arity mismatches,
/// out-of-range options. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Invalid observation data: unreadable or malformed files, non-monotone
/// time grids, non-finite values. CLI exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure at runtime: singular systems, divergence, degenerate
/// windows, domain violations. CLI exit code 4.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace udefit
