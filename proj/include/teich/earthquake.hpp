#pragma once

// Elementary and finite-lamination earthquakes acting on boundary maps.
//
// Conventions: the left of an oriented geodesic tail -> head is the open
// counterclockwise arc (head, tail). A left earthquake of amplitude t > 0
// along g keeps f on the left of g and post-composes f with the translation
// of length t along f(g) on the right. Negative amplitudes are right
// earthquakes.

#include <algorithm>
#include <cmath>
#include <memory>
#include <thread>
#include <vector>

#include "teich/boundary_map.hpp"

namespace teich {

struct EarthquakeSpec {
  MeasuredLamination lamination;
  double amplitude = 0.0;
};

namespace detail {

/// A_x^{-1} A_y as a matrix; same ordering rules as relative_transport.
inline Mobius relative_matrix(const EarthquakeFactorization& fac, const BoundaryPoint& x, const BoundaryPoint& y) {
  struct Crossing {
    std::size_t fault;
    Side x_side;
  };
  std::vector<Crossing> cross;
  for (std::size_t k = 0; k < fac.faults.size(); ++k) {
    Side sx = fault_side(fac.faults[k].source, x);
    Side sy = fault_side(fac.faults[k].source, y);
    if (sx != sy) cross.push_back({k, sx});
  }
  auto nearer_x = [&](const Crossing& c1, const Crossing& c2) {
    const Geodesic& g1 = fac.faults[c1.fault].source;
    const Geodesic& g2 = fac.faults[c2.fault].source;
    const BoundaryPoint& probe =
        (coincident(g1.tail(), g2.tail()) || coincident(g1.tail(), g2.head())) ? g1.head() : g1.tail();
    return fault_side(g2, probe) == c2.x_side;
  };
  std::sort(cross.begin(), cross.end(), nearer_x);
  Mobius m;
  for (const auto& c : cross) {
    const auto& tr = fac.faults[c.fault].translation;
    m = m * (c.x_side == Side::Left ? tr.matrix() : tr.inverse().matrix());
  }
  return m;
}

/// Faults with their amplitudes, all translated along images under the same base map.
inline PiecewiseMobiusHomeo build_earthquake(const PiecewiseMobiusHomeo& f,
                                             const std::vector<std::pair<Geodesic, double>>& faults) {
  auto fac = std::make_shared<EarthquakeFactorization>();
  fac->base = std::make_shared<const PiecewiseMobiusHomeo>(f);
  std::vector<BoundaryPoint> pts = f.breaks();
  for (const auto& [g, amount] : faults) {
    fac->faults.push_back({g, AxisTranslation(f.image_vec(g.tail()), f.image_vec(g.head()), amount)});
    pts.push_back(g.tail());
    pts.push_back(g.head());
  }
  auto breaks = merge_breaks(std::move(pts));
  auto mids = arc_midpoints(breaks);

  // Reference region: the arc just counterclockwise of the head of the first
  // fault, i.e. the region adjacent to it on its left. Its pieces are f's.
  const Geodesic& first = faults.front().first;
  std::size_t head_idx = 0;
  for (std::size_t i = 0; i < breaks.size(); ++i)
    if (coincident(breaks[i], first.head())) head_idx = i;
  BoundaryPoint ref = mids[head_idx];

  std::vector<Mobius> pieces;
  pieces.reserve(breaks.size());
  for (const auto& mid : mids) pieces.push_back(relative_matrix(*fac, ref, mid) * f.piece_at(mid));
  return PiecewiseMobiusHomeo::from_sorted(std::move(breaks), std::move(pieces), std::move(fac));
}

}  // namespace detail

/// E_g^t f: f on the left of g, translation by t along f(g) composed with f on the right.
inline PiecewiseMobiusHomeo elementary_earthquake(const PiecewiseMobiusHomeo& f, const Geodesic& g, double t) {
  if (t == 0.0) return f;
  return detail::build_earthquake(f, {{g, t}});
}

/// Atoms sorted by (tail angle, head angle).
inline std::vector<Atom> canonical_order(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
    if (x.geodesic.tail().angle() != y.geodesic.tail().angle())
      return x.geodesic.tail().angle() < y.geodesic.tail().angle();
    return x.geodesic.head().angle() < y.geodesic.head().angle();
  });
  return atoms;
}

/// E^{t lambda} f for a finite lamination. All atoms are cut at once along
/// their images under f; this is the composite of the elementary earthquakes
/// up to post-composition by a Mobius map, i.e. the same Teichmuller class.
inline PiecewiseMobiusHomeo earthquake(const PiecewiseMobiusHomeo& f, const EarthquakeSpec& spec) {
  if (spec.amplitude == 0.0 || spec.lamination.atoms().empty()) return f;
  std::vector<std::pair<Geodesic, double>> faults;
  for (const auto& a : canonical_order(spec.lamination.atoms()))
    faults.emplace_back(a.geodesic, spec.amplitude * a.weight);
  return detail::build_earthquake(f, faults);
}

inline PiecewiseMobiusHomeo earthquake(const PiecewiseMobiusHomeo& f, const MeasuredLamination& lambda, double t) {
  return earthquake(f, EarthquakeSpec{lambda, t});
}

/// E_{g_1}^{t w_1} o ... o E_{g_k}^{t w_k} f, applied literally one elementary
/// earthquake at a time (g_k first), each along the image of g_i under the map
/// built so far. Crossing atoms are rejected.
inline PiecewiseMobiusHomeo earthquake_sequential(const PiecewiseMobiusHomeo& f, const std::vector<Atom>& atoms,
                                                  double t) {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (geodesics_cross(atoms[i].geodesic, atoms[j].geodesic))
        throw Error(ErrorCode::NotALamination, "earthquake atoms cross");
  PiecewiseMobiusHomeo out = f;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) out = elementary_earthquake(out, it->geodesic, t * it->weight);
  return out;
}

/// L_before(Q) <= L_after(Q) + tol on every box whose diagonal {a, c} carries an atom of lambda.
inline bool left_earthquake_check(const PiecewiseMobiusHomeo& before, const PiecewiseMobiusHomeo& after,
                                  const MeasuredLamination& lambda, const std::vector<Box>& boxes, double tol = 1e-9) {
  LiouvillePullback lb(before), la(after);
  bool ok = true;
  for (const auto& q : boxes) {
    bool aligned = false;
    for (const auto& atom : lambda.atoms()) {
      const auto& g = atom.geodesic;
      if ((coincident(g.tail(), q.a()) && coincident(g.head(), q.c())) ||
          (coincident(g.tail(), q.c()) && coincident(g.head(), q.a())))
        aligned = true;
    }
    if (!aligned) throw Error(ErrorCode::BoxNotAligned, "box diagonal does not carry an atom of the lamination");
    if (!(lb.mass(q) <= la.mass(q) + tol)) ok = false;
  }
  return ok;
}

struct RayRow {
  double t;
  std::size_t box_id;
  double normalized_mass;  // L(E^{t lambda} f)(Q) / t
  double target_mass;      // lambda(Q)
  double abs_err;
};

/// Normalized Liouville masses along the earthquake ray t -> E^{t lambda} f.
inline std::vector<RayRow> earthquake_ray_masses(const PiecewiseMobiusHomeo& f, const MeasuredLamination& lambda,
                                                 const std::vector<double>& ts, const std::vector<Box>& boxes) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0)) throw Error(ErrorCode::InvalidInput, "amplitudes must be positive");
    if (i > 0 && !(ts[i] > ts[i - 1])) throw Error(ErrorCode::InvalidInput, "amplitudes must increase");
  }
  for (const auto& q : boxes)
    if (!is_generic(lambda, q)) throw Error(ErrorCode::NonGenericBox, "box corner is an atom endpoint");

  std::vector<std::vector<RayRow>> per_t(ts.size());
  auto work = [&](std::size_t i) {
    LiouvillePullback lt(earthquake(f, lambda, ts[i]));
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      double nm = lt.mass(boxes[b]) / ts[i];
      double target = lambda.mass(boxes[b]);
      per_t[i].push_back({ts[i], b, nm, target, std::abs(nm - target)});
    }
  };
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (n <= 1 || ts.size() <= 1) {
    for (std::size_t i = 0; i < ts.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < ts.size(); ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  std::vector<RayRow> rows;
  for (auto& v : per_t) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

enum class MonotonicityCase { Same, Crossing, OrthoCrossing };

inline const char* to_string(MonotonicityCase c) {
  switch (c) {
    case MonotonicityCase::Same: return "0";
    case MonotonicityCase::Crossing: return "a";
    case MonotonicityCase::OrthoCrossing: return "b";
  }
  return "?";
}

struct MonotonicityReport {
  MonotonicityCase config;
  double base_mass;
  double d_tail;  // mass change when the tail of g moves counterclockwise by h
  double d_head;  // same for the head
  /// Negative differences for case (a), positive for (b), |difference| < 1e-10 for case (0).
  bool expected_signs(double same_tol = 1e-10) const {
    switch (config) {
      case MonotonicityCase::Crossing: return d_tail < 0.0 && d_head < 0.0;
      case MonotonicityCase::OrthoCrossing: return d_tail > 0.0 && d_head > 0.0;
      case MonotonicityCase::Same: return std::abs(d_tail) < same_tol && std::abs(d_head) < same_tol;
    }
    return false;
  }
};

/// Component of the circle minus the corners of Q containing p: 0 = (a,b), 1 = (b,c), 2 = (c,d), 3 = (d,a).
inline int box_component(const Box& q, const BoundaryPoint& p) {
  const auto& c = q.corners();
  for (const auto& corner : c)
    if (coincident(corner, p)) throw Error(ErrorCode::InvalidInput, "point sits on a box corner");
  for (int i = 0; i < 4; ++i)
    if (in_open_arc(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>((i + 1) % 4)], p)) return i;
  throw Error(ErrorCode::InvalidInput, "point not located");
}

inline MonotonicityCase classify(const Box& q, const Geodesic& g) {
  int x = box_component(q, g.tail()), y = box_component(q, g.head());
  if (x == y) return MonotonicityCase::Same;
  if ((x == 0 && y == 2) || (x == 2 && y == 0)) return MonotonicityCase::Crossing;
  if ((x == 1 && y == 3) || (x == 3 && y == 1)) return MonotonicityCase::OrthoCrossing;
  throw Error(ErrorCode::ConfigurationUnclassified, "geodesic endpoints lie in adjacent components");
}

/// Finite differences of L_{E_g^t f}(Q) in the endpoints of g.
inline MonotonicityReport monotonicity_probe(const PiecewiseMobiusHomeo& f, const Box& q, const Geodesic& g, double t,
                                             double h = 1e-4) {
  MonotonicityCase config = classify(q, g);
  Geodesic moved_tail(BoundaryPoint(g.tail().angle() + h), g.head());
  Geodesic moved_head(g.tail(), BoundaryPoint(g.head().angle() + h));
  if (box_component(q, moved_tail.tail()) != box_component(q, g.tail()) ||
      box_component(q, moved_head.head()) != box_component(q, g.head()))
    throw Error(ErrorCode::InvalidInput, "perturbation step crosses a box corner");
  double base = LiouvillePullback(elementary_earthquake(f, g, t)).mass(q);
  double dt = LiouvillePullback(elementary_earthquake(f, moved_tail, t)).mass(q) - base;
  double dh = LiouvillePullback(elementary_earthquake(f, moved_head, t)).mass(q) - base;
  return {config, base, dt, dh};
}

struct DiagonalBounds {
  double lower;  // t + log(e^{L} - 1)
  double value;  // L_{E_ac^t f}(Q)
  double upper;  // t + L
  bool strict() const { return lower < value && value < upper; }
};

inline DiagonalBounds diagonal_bounds_check(const PiecewiseMobiusHomeo& f, const Box& q, double t) {
  double l = LiouvillePullback(f).mass(q);
  double value = LiouvillePullback(elementary_earthquake(f, q.diagonal(), t)).mass(q);
  return {t + std::log(std::expm1(l)), value, t + l};
}

}  // namespace teich
