#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mintime {

enum class ErrorKind {
  SpeedOrderViolation,
  DimensionMismatch,
  EmptySide,
  DivisionByZeroConstantTerm,
  CompositionConstantTermNonzero,
  QuadratureFailure,
  StepSizeUnderflow,
  DegenerateSpeeds,
  OrderExceeded,
  BudgetExhausted,
  IncompletePivots,
  NotApplicable,
  GridTooCoarse,
  NoTransition,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SpeedOrderViolation: return "SpeedOrderViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptySide: return "EmptySide";
    case ErrorKind::DivisionByZeroConstantTerm: return "DivisionByZeroConstantTerm";
    case ErrorKind::CompositionConstantTermNonzero: return "CompositionConstantTermNonzero";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::DegenerateSpeeds: return "DegenerateSpeeds";
    case ErrorKind::OrderExceeded: return "OrderExceeded";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::IncompletePivots: return "IncompletePivots";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NoTransition: return "NoTransition";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mintime
