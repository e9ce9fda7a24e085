#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schmidt_forge {

enum class ErrorKind {
  EmptyInput,
  NegativeEntry,
  NotNormalized,
  DimensionTooSmall,
  DimensionMismatch,
  XiOutOfRange,
  RankDeficient,
  OutOfRange,
  YOutOfBox,
  ZeroProbability,
  RankDeficientFullConcentration,
  PFixOutOfRange,
  Infeasible,
  DimensionTooLarge,
  NonConvergence,
  DivisionByZeroGuard,
  NotPSD,
  SpectralBoundViolated,
  ParseError,
  SchemaError,
  IoError,
  GridSyntax,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::XiOutOfRange: return "XiOutOfRange";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::YOutOfBox: return "YOutOfBox";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::RankDeficientFullConcentration: return "RankDeficientFullConcentration";
    case ErrorKind::PFixOutOfRange: return "PFixOutOfRange";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DivisionByZeroGuard: return "DivisionByZeroGuard";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::SpectralBoundViolated: return "SpectralBoundViolated";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::GridSyntax: return "GridSyntax";
  }
  return "Unknown";
}

/// Domain error raised by every module. `kind()` identifies the failure;
/// `what()` carries the name followed by a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace schmidt_forge
