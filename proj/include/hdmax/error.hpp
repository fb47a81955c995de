#pragma once

#include <stdexcept>
#include <string>

namespace hdmax {

// Base of everything the library throws on bad input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Observed data violates a structural requirement (unsorted times, bad
// matrix shape, indefinite covariance, ...). The CLI maps this to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

// A configuration or parameter is invalid. The CLI maps this to exit code 3.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParameterError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NotPsdError : public DataError {
public:
    using DataError::DataError;
};

} // namespace hdmax
