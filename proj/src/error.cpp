#include "refstd/error.hpp"

namespace refstd {

std::string_view api_code(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidSpec: return "INVALID_SPEC";
        case ErrorCode::OutOfBounds: return "OUT_OF_BOUNDS";
        case ErrorCode::DegenerateReference: return "DEGENERATE_REFERENCE";
        case ErrorCode::UndefinedEstimator: return "UNDEFINED_ESTIMATOR";
        case ErrorCode::NoRoot: return "NO_ROOT";
        case ErrorCode::UnsupportedMethod:
        case ErrorCode::InvalidAxis:
        case ErrorCode::BadRequest: return "BAD_REQUEST";
    }
    return "BAD_REQUEST";
}

}  // namespace refstd
