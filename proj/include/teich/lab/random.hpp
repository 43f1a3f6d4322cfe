#pragma once

// Seeded generators for boxes, laminations and maps.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "teich/earthquake.hpp"

namespace teich::lab {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// `n` sorted angles with cyclic gaps of at least `min_gap`.
inline std::vector<double> spaced_angles(Rng& rng, std::size_t n, double min_gap) {
  for (;;) {
    std::vector<double> a(n);
    for (auto& x : a) x = uniform(rng, 0.0, kTwoPi);
    std::sort(a.begin(), a.end());
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = ccw_distance(a[i], a[(i + 1) % n]) >= min_gap || n == 1;
    if (ok) return a;
  }
}

/// `n` sorted angles whose cyclic gaps are `min_gap` plus a uniformly random
/// (flat Dirichlet) share of the remaining length.
inline std::vector<double> separated_angles(Rng& rng, std::size_t n, double min_gap) {
  if (double(n) * min_gap >= kTwoPi) throw Error(ErrorCode::InvalidInput, "separation too large for point count");
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = e(rng));
  double spare = kTwoPi - double(n) * min_gap;
  std::vector<double> a(n);
  double pos = uniform(rng, 0.0, kTwoPi);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = wrap_angle(pos);
    pos += min_gap + spare * w[i] / total;
  }
  std::sort(a.begin(), a.end());
  return a;
}

inline Box random_box(Rng& rng, double min_gap = 1e-3) {
  auto a = spaced_angles(rng, 4, min_gap);
  return Box::from_angles(a[0], a[1], a[2], a[3]);
}

inline Mobius random_mobius(Rng& rng, double spread = 2.0) {
  return Mobius::rotation(uniform(rng, 0.0, kTwoPi)) * Mobius::dilation(uniform(rng, -spread, spread)) *
         Mobius::shear(uniform(rng, -spread, spread));
}

/// Atoms on the given sorted endpoints paired by a random non-crossing matching.
inline MeasuredLamination random_lamination_on(Rng& rng, const std::vector<double>& pts, double w_lo = 0.2,
                                               double w_hi = 1.0) {
  std::size_t n = pts.size(), atoms = n / 2;
  // A random balanced bracket word gives a non-crossing matching of sorted points.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> open;
  std::size_t opened = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool can_open = opened < atoms;
    bool can_close = !open.empty();
    bool do_open = can_open && (!can_close || std::bernoulli_distribution(0.5)(rng));
    if (do_open) {
      open.push_back(i);
      ++opened;
    } else {
      pairs.emplace_back(open.back(), i);
      open.pop_back();
    }
  }
  std::vector<Atom> out;
  for (auto [i, j] : pairs) {
    bool flip = std::bernoulli_distribution(0.5)(rng);
    BoundaryPoint p(pts[i]), q(pts[j]);
    out.push_back({flip ? Geodesic(q, p) : Geodesic(p, q), uniform(rng, w_lo, w_hi)});
  }
  return MeasuredLamination(out);
}

/// Atoms on 2k distinct spaced endpoints paired by a random non-crossing matching.
inline MeasuredLamination random_lamination(Rng& rng, std::size_t atoms, double min_gap = 0.05, double w_lo = 0.2,
                                            double w_hi = 1.0) {
  return random_lamination_on(rng, spaced_angles(rng, 2 * atoms, min_gap), w_lo, w_hi);
}

/// A lamination of `atoms` atoms and `boxes` boxes such that, for each box,
/// its corners and the atom endpoints are pairwise at least `sep` apart.
inline std::pair<MeasuredLamination, std::vector<Box>> random_separated_instance(Rng& rng, std::size_t atoms,
                                                                                 std::size_t boxes, double sep) {
  std::size_t n = 2 * atoms;
  auto ends = separated_angles(rng, n, 2.0 * sep);
  auto lambda = random_lamination_on(rng, ends);
  std::vector<Box> out;
  while (out.size() < boxes) {
    auto corners = separated_angles(rng, 4, sep);
    bool ok = true;
    for (double c : corners)
      for (double e : ends) ok = ok && circular_distance(c, e) >= sep;
    if (ok) out.push_back(Box::from_angles(corners[0], corners[1], corners[2], corners[3]));
  }
  return {lambda, out};
}

/// A Mobius map composed with an earthquake of the identity; at most 2 * max_atoms pieces.
inline PiecewiseMobiusHomeo random_map(Rng& rng, std::size_t max_atoms = 8, double t_lo = 0.2, double t_hi = 2.0) {
  std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_atoms)(rng);
  auto lambda = random_lamination(rng, k);
  double t = uniform(rng, t_lo, t_hi);
  return earthquake(PiecewiseMobiusHomeo(), lambda, t).post_composed(random_mobius(rng));
}

/// Q with every corner at least `margin` away from every atom endpoint and
/// Liouville mass at most `max_mass`.
inline Box random_generic_box(Rng& rng, const MeasuredLamination& lambda, double margin, double min_gap = 0.05,
                              double max_mass = std::numeric_limits<double>::infinity()) {
  for (;;) {
    Box q = random_box(rng, min_gap);
    bool ok = liouville_mass(q) <= max_mass;
    for (const auto& a : lambda.atoms())
      for (const auto& c : q.corners())
        ok = ok && circular_distance(c.angle(), a.geodesic.tail().angle()) >= margin &&
             circular_distance(c.angle(), a.geodesic.head().angle()) >= margin;
    if (ok) return q;
  }
}

}  // namespace teich::lab
