#pragma once

#include <stdexcept>
#include <string>

namespace teich {

enum class ErrorCode {
  DegenerateTriple,
  OrientationMismatch,
  DegeneratePoints,
  InvalidMobius,
  InvalidBox,
  InvalidGeodesic,
  PointOnGeodesicEndpoint,
  NotAtomic,
  SamplerBudgetExceeded,
  EmptyFamily,
  ContinuityViolation,
  NotALamination,
  BoxNotAligned,
  NonGenericBox,
  ConfigurationUnclassified,
  InvalidInput,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateTriple: return "DegenerateTriple";
    case ErrorCode::OrientationMismatch: return "OrientationMismatch";
    case ErrorCode::DegeneratePoints: return "DegeneratePoints";
    case ErrorCode::InvalidMobius: return "InvalidMobius";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::InvalidGeodesic: return "InvalidGeodesic";
    case ErrorCode::PointOnGeodesicEndpoint: return "PointOnGeodesicEndpoint";
    case ErrorCode::NotAtomic: return "NotAtomic";
    case ErrorCode::SamplerBudgetExceeded: return "SamplerBudgetExceeded";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::ContinuityViolation: return "ContinuityViolation";
    case ErrorCode::NotALamination: return "NotALamination";
    case ErrorCode::BoxNotAligned: return "BoxNotAligned";
    case ErrorCode::NonGenericBox: return "NonGenericBox";
    case ErrorCode::ConfigurationUnclassified: return "ConfigurationUnclassified";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace teich
