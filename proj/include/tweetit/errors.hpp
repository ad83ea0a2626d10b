#pragma once

#include <stdexcept>
#include <string>

namespace tweetit {

// Fatal filesystem / read-write failure. CLI maps this to exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or input data. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A persisted index no longer matches the inputs (or format) it was built
// from. Subtype of ConfigError so it also exits with code 2.
class StaleIndexError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace tweetit
