#pragma once

#include <stdexcept>
#include <string>

namespace ghost {

// Each error kind maps onto one CLI exit code (see exit_code()).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

// Bad arguments or out-of-range requests (J < 2, j >= count, empty scan list).
class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

// Invalid or inconsistent configuration (grid mismatch, cutoff above Nyquist).
class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

// Malformed input data: non-finite values, negative objects, bad file formats.
class DataError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

// A numerical procedure could not produce a result (empty support, zero variance).
class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

}  // namespace ghost
