#pragma once

#include <stdexcept>
#include <string>

namespace trec {

/// Malformed input: bad CSV cells, unknown variable names, schema mismatches.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: rank deficiency, missing residual degrees of freedom.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Command-line misuse (bad flag grammar); maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trec
