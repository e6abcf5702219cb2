#pragma once

#include <stdexcept>
#include <string>

namespace rcdtpod {

/// Raised when caller-supplied input violates a precondition (bad shape,
/// out-of-range argument, malformed file). The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a well-formed computation cannot complete (I/O failure,
/// numerical breakdown). The CLI maps it to exit code 1.
class RuntimeError : public std::runtime_error {
public:
    explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rcdtpod
