#pragma once

#include <stdexcept>
#include <string>

namespace thdas {

/// Base of every error raised by the library. The CLI maps `UsageError` and
/// `ConfigError` to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A value fell outside the range an operation can handle.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on an argument does not hold.
class ContractError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

}  // namespace thdas
