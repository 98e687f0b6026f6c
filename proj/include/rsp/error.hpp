#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsp {

enum class ErrorKind {
  NegativeWeight,
  ColumnNotNormalized,
  NotSquare,
  DimensionMismatch,
  AlphaOutOfRange,
  NTooSmall,
  POutOfRange,
  NotIrreducible,
  NotDiagonalizable,
  BiorthogonalizationFailed,
  PerronSignMismatch,
  GammaOutOfRange,
  InvalidParameter,
  UncoveredRegime,
  RegimeBoundary,
  SameVertex,
  UnsupportedExample,
  DomainError,
  HorizonZero,
  TooLarge,
  NotSymmetric,
  NegativeEigenvalue,
  RankZero,
  RankMismatch,
  DegenerateState,
  ProbOutOfRange,
  ZeroVariancePair,
  HorizonOrder,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Every validation failure in the library is reported through this type; the
/// kind is stable and machine-checkable, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::ColumnNotNormalized: return "ColumnNotNormalized";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::NTooSmall: return "NTooSmall";
    case ErrorKind::POutOfRange: return "POutOfRange";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::BiorthogonalizationFailed: return "BiorthogonalizationFailed";
    case ErrorKind::PerronSignMismatch: return "PerronSignMismatch";
    case ErrorKind::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::UncoveredRegime: return "UncoveredRegime";
    case ErrorKind::RegimeBoundary: return "RegimeBoundary";
    case ErrorKind::SameVertex: return "SameVertex";
    case ErrorKind::UnsupportedExample: return "UnsupportedExample";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::HorizonZero: return "HorizonZero";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::RankZero: return "RankZero";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::ProbOutOfRange: return "ProbOutOfRange";
    case ErrorKind::ZeroVariancePair: return "ZeroVariancePair";
    case ErrorKind::HorizonOrder: return "HorizonOrder";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace rsp
