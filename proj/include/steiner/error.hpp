#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace steiner {

enum class ErrorCode {
  NotAUnit,
  ModulusOutOfRange,
  Structural,
  MultiplierOrderTooSmall,
  LengthMismatch,
  ParameterInfeasible,
  InvalidFamily,
  NotAPair,
  NotABijection,
  InvalidDesign,
  ParameterMismatch,
  BudgetExceeded,
  ParseError,
  ValidationError,
  UnknownEntry,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::ModulusOutOfRange: return "ModulusOutOfRange";
    case ErrorCode::Structural: return "Structural";
    case ErrorCode::MultiplierOrderTooSmall: return "MultiplierOrderTooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ParameterInfeasible: return "ParameterInfeasible";
    case ErrorCode::InvalidFamily: return "InvalidFamily";
    case ErrorCode::NotAPair: return "NotAPair";
    case ErrorCode::NotABijection: return "NotABijection";
    case ErrorCode::InvalidDesign: return "InvalidDesign";
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace steiner
