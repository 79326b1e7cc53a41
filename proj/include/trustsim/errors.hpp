#pragma once

#include <stdexcept>
#include <string>

namespace trustsim {

// Bad run configuration or infeasible setup (CLI exit 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data: bad CSV rows, invalid roster/params files (CLI exit 2).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Game-rule violation: out-of-bounds amounts, inconsistent records (CLI exit 2).
struct ProtocolError : DataError {
    explicit ProtocolError(const std::string& msg) : DataError(msg) {}
};

struct SingularityError : DataError {
    explicit SingularityError(const std::string& msg) : DataError(msg) {}
};

struct InsufficientDataError : DataError {
    explicit InsufficientDataError(const std::string& msg) : DataError(msg) {}
};

// Non-finite intermediate value; must not occur for valid inputs (CLI exit 3).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trustsim
