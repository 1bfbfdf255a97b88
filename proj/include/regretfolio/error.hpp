#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regretfolio {

enum class ErrorCode {
    DimensionMismatch,
    NonSymmetric,
    NotPositiveSemidefinite,
    InvalidArgument,
    InfeasibleCap,
    InfeasibleReturn,
    NotConverged,
    DegenerateRisk,
    KeyMismatch,
    UndefinedRatio,
    ParseError,
    ValidationError,
    PsdError,
    IoError,
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InfeasibleCap: return "InfeasibleCap";
        case ErrorCode::InfeasibleReturn: return "InfeasibleReturn";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::DegenerateRisk: return "DegenerateRisk";
        case ErrorCode::KeyMismatch: return "KeyMismatch";
        case ErrorCode::UndefinedRatio: return "UndefinedRatio";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::PsdError: return "PsdError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Single exception type for the library; the code tells callers which
/// contract was violated (the CLI maps codes onto exit statuses).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace regretfolio
