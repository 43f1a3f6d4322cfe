#pragma once

namespace teich {

/// Numerical tolerances shared by every module. Defaults can be overridden per call.
struct Tolerances {
  double point = 1e-10;  // circular distance (radians) below which two boundary points coincide
  double det = 1e-12;    // allowed deviation of det from 1 after normalization
  double compare = 1e-9;
};

inline constexpr Tolerances kDefaultTol{};

}  // namespace teich
