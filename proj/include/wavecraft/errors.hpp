#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavecraft {

enum class ErrorCode {
    Parse,
    UndeclaredSymbol,
    NonPolynomial,
    DivisionByZero,
    UnboundSymbol,
    NoBalance,
    LinearEquation,
    NoExactSolution,
    TooHard,
    ZeroDenominator,
    NonNegativeGamma,
    NoSignChange,
    Singularity,
    InvalidProblem,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorCode::NonPolynomial: return "NonPolynomial";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UnboundSymbol: return "UnboundSymbol";
    case ErrorCode::NoBalance: return "NoBalance";
    case ErrorCode::LinearEquation: return "LinearEquation";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::TooHard: return "TooHard";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NonNegativeGamma: return "NonNegativeGamma";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::Singularity: return "Singularity";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Syntax or declaration error; `column` is 1-based.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, const std::string& message, std::size_t column)
        : Error(code, message + " at column " + std::to_string(column)), column_(column) {}

    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

} // namespace wavecraft
