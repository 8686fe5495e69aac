#pragma once

#include <stdexcept>
#include <string>

namespace resetgeo {

enum class ErrorCode {
  NonSquare,
  NegativeEntry,
  ColumnSumViolation,
  DimMismatch,
  ExpDivergence,
  NonpositiveRate,
  AlphaTwo,
  BoundaryPoint,
  BoundaryTarget,
  BoundarySample,
  BoundaryBlochVector,
  NotStrictlyPositive,
  NoConvergence,
  BudgetExceeded,
  RateExceedsGamma,
  TracePreservationViolation,
  SingularInput,
  OutOfRange,
  DimTooLarge,
  ZeroEntropyOutput,
  ParseError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ColumnSumViolation: return "ColumnSumViolation";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ExpDivergence: return "ExpDivergence";
    case ErrorCode::NonpositiveRate: return "NonpositiveRate";
    case ErrorCode::AlphaTwo: return "AlphaTwo";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::BoundaryTarget: return "BoundaryTarget";
    case ErrorCode::BoundarySample: return "BoundarySample";
    case ErrorCode::BoundaryBlochVector: return "BoundaryBlochVector";
    case ErrorCode::NotStrictlyPositive: return "NotStrictlyPositive";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::RateExceedsGamma: return "RateExceedsGamma";
    case ErrorCode::TracePreservationViolation: return "TracePreservationViolation";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimTooLarge: return "DimTooLarge";
    case ErrorCode::ZeroEntropyOutput: return "ZeroEntropyOutput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace resetgeo
