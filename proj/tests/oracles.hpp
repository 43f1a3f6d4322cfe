#pragma once

// Reference computations written independently of the library: complex
// arithmetic in the disk, explicit half-plane formulas, brute-force grids.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline cplx disk(double theta) { return std::polar(1.0, theta); }

/// (a-c)(b-d) / ((a-d)(b-c)) on the unit circle; real for concyclic points.
inline double crossratio_disk(double a, double b, double c, double d) {
  cplx za = disk(a), zb = disk(b), zc = disk(c), zd = disk(d);
  return ((za - zc) * (zb - zd) / ((za - zd) * (zb - zc))).real();
}

/// Same crossratio with half-plane coordinates; +-infinity entries drop out.
inline double crossratio_line(double a, double b, double c, double d) {
  auto diff = [](double x, double y) { return std::isinf(x) || std::isinf(y) ? 1.0 : x - y; };
  return diff(a, c) * diff(b, d) / (diff(a, d) * diff(b, c));
}

/// Cayley chart: angle -> real line, with the pole at angle pi.
inline double to_line(double theta) {
  cplx w = disk(theta);
  cplx z = cplx(0, 1) * (1.0 - w) / (1.0 + w);
  return z.real();
}

/// z -> (a z + b) / (c z + d) on the extended real line.
inline double mobius_line(const double m[4], double x) {
  if (std::isinf(x)) return m[2] == 0.0 ? std::numeric_limits<double>::infinity() : m[0] / m[2];
  double den = m[2] * x + m[3];
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return (m[0] * x + m[1]) / den;
}

/// Open ccw arc membership by sorting angles.
inline bool in_ccw_open(double from, double to, double p) {
  auto w = [](double x) { return std::fmod(std::fmod(x, 2 * std::numbers::pi) + 2 * std::numbers::pi, 2 * std::numbers::pi); };
  double len = w(to - from), off = w(p - from);
  return off > 0.0 && off < len;
}

/// Elementary left earthquake of the identity along the upward axis (0, inf)
/// in the half-plane: x -> e^t x for x > 0 (the right side), fixed elsewhere.
inline double quake_axis(double t, double x) {
  if (std::isinf(x)) return x;
  return x > 0.0 ? std::exp(t) * x : x;
}

/// Max of log crossratio(f(a), f(b), f(c), f(d)) / log 2 over symmetric boxes
/// with a < b < c on an n^3 angle grid and d fixed by crossratio 2.
template <class F>
double dense_qs(F f, int n) {
  double best = 0.0;
  const double log2 = std::log(2.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = std::tan((2 * std::numbers::pi * i / n + 1e-3) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        double a = x[static_cast<std::size_t>(i)], b = x[static_cast<std::size_t>(j)], c = x[static_cast<std::size_t>(k)];
        double den = 2 * (b - c) - (a - c);
        if (den == 0.0) continue;
        double d = (2 * a * (b - c) - b * (a - c)) / den;
        double r = crossratio_line(f(a), f(b), f(c), f(d));
        if (std::isfinite(r) && r > 0.0) best = std::max(best, std::log(r) / log2);
      }
  return best;
}

}  // namespace oracle
