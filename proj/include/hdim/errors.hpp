/**
 * errors.hpp
 *
 * Error taxonomy shared by every module.  Each failure mode carries a stable
 * symbolic code so callers (and tests) can dispatch on the condition rather
 * than parse message text.  Messages stay human-readable: the code name is
 * prefixed to the detail string.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace hdim {

enum class ErrorCode {
    SingularMatrix,
    NumericalFailure,
    InvalidPsi,
    UnsupportedAnalytic,
    MissingHProfile,
    NonExpandingDenominator,
    NotExpanding,
    InvalidCounterexampleFamily,
    HypothesisViolated,
    InvalidBreakpoint,
    BudgetExceeded,
    InsufficientBox,
    BelowThreshold,
    Inconclusive,
    InsufficientResolution,
    InvalidConfig,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::SingularMatrix:              return "SingularMatrix";
        case ErrorCode::NumericalFailure:            return "NumericalFailure";
        case ErrorCode::InvalidPsi:                  return "InvalidPsi";
        case ErrorCode::UnsupportedAnalytic:         return "UnsupportedAnalytic";
        case ErrorCode::MissingHProfile:             return "MissingHProfile";
        case ErrorCode::NonExpandingDenominator:     return "NonExpandingDenominator";
        case ErrorCode::NotExpanding:                return "NotExpanding";
        case ErrorCode::InvalidCounterexampleFamily: return "InvalidCounterexampleFamily";
        case ErrorCode::HypothesisViolated:          return "HypothesisViolated";
        case ErrorCode::InvalidBreakpoint:           return "InvalidBreakpoint";
        case ErrorCode::BudgetExceeded:              return "BudgetExceeded";
        case ErrorCode::InsufficientBox:             return "InsufficientBox";
        case ErrorCode::BelowThreshold:              return "BelowThreshold";
        case ErrorCode::Inconclusive:                return "Inconclusive";
        case ErrorCode::InsufficientResolution:      return "InsufficientResolution";
        case ErrorCode::InvalidConfig:               return "InvalidConfig";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
    throw Error(code, detail);
}

}  // namespace hdim
