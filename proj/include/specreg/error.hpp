#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specreg {

enum class ErrorCode {
    NonSymmetric,
    EigFailure,
    NotPsd,
    GridTooCoarse,
    DomainError,
    WrongKind,
    StepTooLarge,
    BadParams,
    KernelMismatch,
    InsufficientGrid,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::EigFailure: return "EigFailure";
        case ErrorCode::NotPsd: return "NotPsd";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::WrongKind: return "WrongKind";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::KernelMismatch: return "KernelMismatch";
        case ErrorCode::InsufficientGrid: return "InsufficientGrid";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace specreg
