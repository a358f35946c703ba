#pragma once

#include <stdexcept>
#include <string>

namespace gmcphd {

/// Malformed configuration or invalid parameters (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violating a file schema or an operation precondition (CLI exit code 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Factorization failure or other numerical breakdown (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int data = 3;
inline constexpr int numerical = 4;
}  // namespace exit_code

}  // namespace gmcphd
