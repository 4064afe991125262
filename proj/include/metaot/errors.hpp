#pragma once

#include <stdexcept>
#include <string>

namespace metaot {

/// Base of all library errors. The CLI maps these to the "data error" exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (ragged rows, bad weights, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not complete (factorization failure, size guard).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace metaot
