#pragma once

#include <stdexcept>
#include <string>

namespace irds {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Blow-up, invariant violation or boundary contamination (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A classification could not be decided within its iteration budget (CLI exit code 4).
class InconclusiveError : public Error {
public:
    using Error::Error;
};

}  // namespace irds
