#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace refstd {

enum class ErrorCode {
    InvalidSpec,
    OutOfBounds,
    DegenerateReference,
    UndefinedEstimator,
    NoRoot,
    UnsupportedMethod,
    InvalidAxis,
    BadRequest,
};

/// Wire name of an error code, as used in API error bodies and sweep skip reasons.
std::string_view api_code(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string detail = {})
        : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    /// Machine-readable location of the problem (a field path), may be empty.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace refstd
