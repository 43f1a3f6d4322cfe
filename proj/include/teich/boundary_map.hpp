#pragma once

// Piecewise-Mobius circle homeomorphisms, their Liouville pullbacks, class
// comparison and the quasisymmetric constant.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

#include "teich/box.hpp"
#include "teich/currents.hpp"
#include "teich/sampler.hpp"

namespace teich {

class PiecewiseMobiusHomeo;

/// A map obtained from `base` by earthquakes along disjoint atoms. On each
/// complementary region R the map is A_R o base, where A_R is a product of
/// translations along base-images of the atoms. Keeping this factorization
/// lets box masses be computed from relative products A_x^{-1} A_y applied in
/// each translation's eigenbasis, which stays accurate long after the
/// materialized pieces have lost the image points to rounding.
struct EarthquakeFactorization {
  struct Fault {
    Geodesic source;              // atom in the domain
    AxisTranslation translation;  // along base(source), tail -> head, by the amplitude
  };
  std::shared_ptr<const PiecewiseMobiusHomeo> base;
  std::vector<Fault> faults;
};

class PiecewiseMobiusHomeo {
 public:
  /// The identity map.
  PiecewiseMobiusHomeo() : pieces_{Mobius::identity()} {}

  explicit PiecewiseMobiusHomeo(const Mobius& m) : pieces_{m} {}

  /// `breaks` in counterclockwise cyclic order (any starting point); piece i
  /// governs the arc [breaks[i], breaks[i+1]]. Continuity is checked within
  /// `tol` and the image arcs must wind exactly once around the circle.
  PiecewiseMobiusHomeo(std::vector<BoundaryPoint> breaks, std::vector<Mobius> pieces, double tol = 1e-9) {
    if (breaks.empty()) {
      if (pieces.size() != 1) throw Error(ErrorCode::InvalidInput, "a map without breaks needs exactly one piece");
      pieces_ = std::move(pieces);
      return;
    }
    if (breaks.size() != pieces.size())
      throw Error(ErrorCode::InvalidInput, "breaks and pieces must have the same length");
    if (breaks.size() == 1) {
      pieces_ = {pieces.front()};
      return;
    }
    assign_sorted(std::move(breaks), std::move(pieces));
    validate(tol);
  }

  std::size_t size() const { return pieces_.size(); }
  bool is_global() const { return breaks_.empty(); }
  const std::vector<BoundaryPoint>& breaks() const { return breaks_; }
  const std::vector<Mobius>& pieces() const { return pieces_; }
  const std::shared_ptr<const EarthquakeFactorization>& factorization() const { return factor_; }

  /// Index of the piece whose half-open arc [p_i, p_{i+1}) contains p.
  std::size_t piece_index(const BoundaryPoint& p) const {
    if (breaks_.empty()) return 0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), p.angle(),
                               [](double v, const BoundaryPoint& b) { return v < b.angle(); });
    if (it == breaks_.begin()) return breaks_.size() - 1;
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  const Mobius& piece_at(const BoundaryPoint& p) const { return pieces_[piece_index(p)]; }

  BoundaryPoint apply(const BoundaryPoint& p) const { return piece_at(p).apply(p); }

  /// Homogeneous image vector, not normalized to the circle.
  Vec2 image_vec(const BoundaryPoint& p) const { return piece_at(p).apply(p.vec()); }

  /// Post-composition by a Mobius map; Liouville masses are unchanged.
  PiecewiseMobiusHomeo post_composed(const Mobius& m) const {
    PiecewiseMobiusHomeo out = *this;
    for (auto& piece : out.pieces_) piece = m * piece;
    return out;
  }

  /// The same pieces without the earthquake factorization; masses are then
  /// computed from the pieces alone.
  PiecewiseMobiusHomeo materialized() const {
    PiecewiseMobiusHomeo out = *this;
    out.factor_.reset();
    return out;
  }

  /// Trusted construction from already sorted data (no validation).
  static PiecewiseMobiusHomeo from_sorted(std::vector<BoundaryPoint> breaks, std::vector<Mobius> pieces,
                                          std::shared_ptr<const EarthquakeFactorization> factor = nullptr) {
    PiecewiseMobiusHomeo out;
    out.breaks_ = std::move(breaks);
    out.pieces_ = std::move(pieces);
    out.factor_ = std::move(factor);
    return out;
  }

 private:
  void assign_sorted(std::vector<BoundaryPoint> breaks, std::vector<Mobius> pieces) {
    std::size_t n = breaks.size();
    std::size_t start = static_cast<std::size_t>(
        std::min_element(breaks.begin(), breaks.end(),
                         [](const BoundaryPoint& x, const BoundaryPoint& y) { return x.angle() < y.angle(); }) -
        breaks.begin());
    breaks_.resize(n);
    pieces_.resize(n, Mobius::identity());
    for (std::size_t k = 0; k < n; ++k) {
      breaks_[k] = breaks[(start + k) % n];
      pieces_[k] = pieces[(start + k) % n];
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (!(breaks_[k].angle() < breaks_[k + 1].angle()))
        throw Error(ErrorCode::InvalidInput, "breaks are not in counterclockwise cyclic order");
  }

  void validate(double tol) const {
    std::size_t n = breaks_.size();
    double winding = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = (i + 1) % n;
      BoundaryPoint from_left = pieces_[i].apply(breaks_[j]);
      BoundaryPoint from_right = pieces_[j].apply(breaks_[j]);
      if (!coincident(from_left, from_right, tol))
        throw Error(ErrorCode::ContinuityViolation,
                    "pieces " + std::to_string(i) + " and " + std::to_string(j) + " disagree at their common break");
      winding += ccw_distance(pieces_[i].apply(breaks_[i]).angle(), from_left.angle());
    }
    if (std::abs(winding - kTwoPi) > 1e-6)
      throw Error(ErrorCode::ContinuityViolation, "image arcs do not tile the circle exactly once");
  }

  std::vector<BoundaryPoint> breaks_;
  std::vector<Mobius> pieces_;
  std::shared_ptr<const EarthquakeFactorization> factor_;
};

inline BoundaryPoint apply_map(const PiecewiseMobiusHomeo& f, const BoundaryPoint& p) { return f.apply(p); }

inline AtomicCurrent pushforward(const AtomicCurrent& alpha, const PiecewiseMobiusHomeo& h) {
  std::vector<Atom> atoms;
  for (const auto& a : alpha.atoms())
    atoms.push_back({Geodesic(h.apply(a.geodesic.tail()), h.apply(a.geodesic.head()), 0.0), a.weight});
  return AtomicCurrent(atoms, 0.0);
}

/// Sort points by angle and drop those within tol of their predecessor (cyclically).
inline std::vector<BoundaryPoint> merge_breaks(std::vector<BoundaryPoint> pts, double tol = kDefaultTol.point) {
  std::sort(pts.begin(), pts.end(),
            [](const BoundaryPoint& x, const BoundaryPoint& y) { return x.angle() < y.angle(); });
  std::vector<BoundaryPoint> out;
  for (const auto& p : pts)
    if (out.empty() || !coincident(out.back(), p, tol)) out.push_back(p);
  while (out.size() > 1 && coincident(out.front(), out.back(), tol)) out.pop_back();
  return out;
}

/// Midpoints of the arcs between consecutive sorted breaks.
inline std::vector<BoundaryPoint> arc_midpoints(const std::vector<BoundaryPoint>& breaks) {
  std::vector<BoundaryPoint> mids;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const auto& p = breaks[i];
    const auto& q = breaks[(i + 1) % breaks.size()];
    double len = breaks.size() == 1 ? kTwoPi : ccw_distance(p.angle(), q.angle());
    mids.emplace_back(p.angle() + 0.5 * len);
  }
  return mids;
}

inline PiecewiseMobiusHomeo invert_map(const PiecewiseMobiusHomeo& f) {
  if (f.is_global()) return PiecewiseMobiusHomeo(f.pieces().front().inverse());
  std::vector<BoundaryPoint> breaks;
  std::vector<Mobius> pieces;
  for (std::size_t i = 0; i < f.size(); ++i) {
    breaks.push_back(f.pieces()[i].apply(f.breaks()[i]));
    pieces.push_back(f.pieces()[i].inverse());
  }
  return PiecewiseMobiusHomeo(std::move(breaks), std::move(pieces));
}

/// f o g.
inline PiecewiseMobiusHomeo compose_maps(const PiecewiseMobiusHomeo& f, const PiecewiseMobiusHomeo& g) {
  if (g.is_global() && f.is_global()) return PiecewiseMobiusHomeo(f.pieces().front() * g.pieces().front());
  auto g_inv = invert_map(g);
  std::vector<BoundaryPoint> pts = g.breaks();
  for (const auto& p : f.breaks()) pts.push_back(g_inv.apply(p));
  auto breaks = merge_breaks(std::move(pts));
  if (breaks.size() < 2) {
    auto mid = BoundaryPoint(breaks.empty() ? 0.0 : breaks.front().angle() + std::numbers::pi);
    return PiecewiseMobiusHomeo(f.piece_at(g.apply(mid)) * g.piece_at(mid));
  }
  std::vector<Mobius> pieces;
  for (const auto& mid : arc_midpoints(breaks)) pieces.push_back(f.piece_at(g.apply(mid)) * g.piece_at(mid));
  return PiecewiseMobiusHomeo(std::move(breaks), std::move(pieces));
}

namespace detail {

/// Which side of a fault a point is on; a point on an endpoint counts as Left.
inline Side fault_side(const Geodesic& fault, const BoundaryPoint& p) {
  if (coincident(p, fault.tail()) || coincident(p, fault.head())) return Side::Left;
  return side_of(fault, p);
}

/// A_x^{-1} A_y v for an earthquake factorization, as a vector. The result is
/// renormalized after every translation; the logarithm of the accumulated
/// scale is added to `log_scale`.
inline Vec2 relative_transport(const EarthquakeFactorization& fac, const BoundaryPoint& x, const BoundaryPoint& y,
                               Vec2 v, double& log_scale) {
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
  // Faults separating x from y are nested; order them starting next to x.
  auto nearer_x = [&](const Crossing& c1, const Crossing& c2) {
    const Geodesic& g1 = fac.faults[c1.fault].source;
    const Geodesic& g2 = fac.faults[c2.fault].source;
    const BoundaryPoint& probe =
        (coincident(g1.tail(), g2.tail()) || coincident(g1.tail(), g2.head())) ? g1.head() : g1.tail();
    return fault_side(g2, probe) == c2.x_side;
  };
  std::sort(cross.begin(), cross.end(), nearer_x);
  for (auto it = cross.rbegin(); it != cross.rend(); ++it) {
    const auto& tr = fac.faults[it->fault].translation;
    v = it->x_side == Side::Left ? tr.apply(v) : tr.inverse().apply(v);
    double n = std::hypot(v.x, v.y);
    v = {v.x / n, v.y / n};
    log_scale += std::log(n);
  }
  return v;
}

}  // namespace detail

/// The Liouville measure pulled back by a boundary map: mass(Q) is the
/// Liouville mass of the image box f(Q).
class LiouvillePullback {
 public:
  explicit LiouvillePullback(PiecewiseMobiusHomeo f) : f_(std::move(f)) {}

  const PiecewiseMobiusHomeo& map() const { return f_; }

  /// Logarithm of the crossratio of the image corners.
  double mass(const Box& q) const {
    const auto& c = q.corners();
    std::array<Vec2, 4> v;
    if (const auto& fac = f_.factorization()) {
      for (std::size_t i = 0; i < 4; ++i) v[i] = fac->base->image_vec(c[i]);
      double log_scale = 0.0;
      auto d = [&](std::size_t i, std::size_t j) {
        double ls = 0.0;
        double dv = det(v[i], detail::relative_transport(*fac, c[i], c[j], v[j], ls));
        log_scale += (i + j == 3 ? -ls : ls);  // d(0,3), d(1,2) sit in the denominator
        return dv;
      };
      double num = d(0, 2) * d(1, 3);
      double den = d(0, 3) * d(1, 2);
      return std::log(num / den) + log_scale;
    }
    for (std::size_t i = 0; i < 4; ++i) v[i] = f_.image_vec(c[i]);
    return std::log((det(v[0], v[2]) * det(v[1], v[3])) / (det(v[0], v[3]) * det(v[1], v[2])));
  }

  double image_crossratio(const Box& q) const { return std::exp(mass(q)); }

 private:
  PiecewiseMobiusHomeo f_;
};

inline LiouvillePullback liouville_current(const PiecewiseMobiusHomeo& f) { return LiouvillePullback(f); }

/// Default normalization triple: the cube roots of unity.
inline std::array<BoundaryPoint, 3> default_triple() {
  return {BoundaryPoint(0.0), BoundaryPoint(kTwoPi / 3.0), BoundaryPoint(2.0 * kTwoPi / 3.0)};
}

/// Post-compose f with the Mobius map sending f(src_i) to dst_i.
inline PiecewiseMobiusHomeo normalize3(const PiecewiseMobiusHomeo& f, const std::array<BoundaryPoint, 3>& src,
                                       const std::array<BoundaryPoint, 3>& dst) {
  std::array<BoundaryPoint, 3> img{f.apply(src[0]), f.apply(src[1]), f.apply(src[2])};
  return f.post_composed(mobius_from_triples(img, dst));
}

inline PiecewiseMobiusHomeo normalize3(const PiecewiseMobiusHomeo& f) {
  return normalize3(f, default_triple(), default_triple());
}

/// Fixed low-discrepancy angles: the golden-ratio (Kronecker) sequence.
inline std::vector<BoundaryPoint> quasi_uniform_points(int count, double offset = 0.1234567) {
  constexpr double kGolden = 0.6180339887498949;
  std::vector<BoundaryPoint> pts;
  for (int k = 0; k < count; ++k) {
    double u = offset + kGolden * k;
    pts.emplace_back(kTwoPi * (u - std::floor(u)));
  }
  return pts;
}

/// Largest circular distance between normalize3(f) and normalize3(g) over the
/// breaks of both maps and `samples` quasi-uniform points.
inline double class_deviation(const PiecewiseMobiusHomeo& f, const PiecewiseMobiusHomeo& g, int samples = 256) {
  auto nf = normalize3(f);
  auto ng = normalize3(g);
  auto pts = quasi_uniform_points(samples);
  pts.insert(pts.end(), f.breaks().begin(), f.breaks().end());
  pts.insert(pts.end(), g.breaks().begin(), g.breaks().end());
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, circular_distance(nf.apply(p).angle(), ng.apply(p).angle()));
  return worst;
}

inline bool class_equal(const PiecewiseMobiusHomeo& f, const PiecewiseMobiusHomeo& g, double tol = 1e-9,
                        int samples = 256) {
  return class_deviation(f, g, samples) <= tol;
}

/// Lower bound for M(f) = sup over symmetric boxes Q of L_f(Q) / log 2.
///
/// Symmetric boxes are psi(Q_std) for sampled psi. Besides the Iwasawa grid,
/// a second budget of equal size goes to boxes with a corner within 0.05 rad
/// of a break of f: psi = rotation(p + delta) * K(s, u) * rotation(-j pi/2),
/// where K(s, u) fixes the boundary point 1 and corner j of Q_std is sent to
/// p + delta.
inline SupremumEstimate qs_constant_search(const PiecewiseMobiusHomeo& f, const SamplerConfig& sampler) {
  LiouvillePullback lf(f);
  const Box q_std = Box::standard();
  const double log2 = std::log(2.0);
  auto objective = [&](const Mobius& psi) { return lf.mass(image_box(psi, q_std)) / log2; };

  std::vector<MobiusFamily> families{iwasawa_family(sampler)};
  if (!f.breaks().empty()) {
    double budget = double(sampler.rotations) * sampler.dilation_steps * sampler.shear_steps;
    double per_family = budget / (4.0 * double(f.breaks().size()));
    int m = std::max(3, static_cast<int>(std::lround(std::cbrt(per_family))));
    if (m % 2 == 0) ++m;
    for (const auto& p : f.breaks()) {
      for (int j = 0; j < 4; ++j) {
        MobiusFamily fam;
        double base = p.angle();
        double back = -0.5 * std::numbers::pi * j;
        fam.make = [base, back](double delta, double s, double u) {
          return Mobius::rotation(base + delta) * Mobius(std::exp(0.5 * s), 0.0, u, std::exp(-0.5 * s)) *
                 Mobius::rotation(back);
        };
        fam.axes = {GridAxis{-0.05, 0.05, m, false},
                    GridAxis{-sampler.dilation_range, sampler.dilation_range, m, false},
                    GridAxis{-sampler.shear_range, sampler.shear_range, m, false}};
        families.push_back(std::move(fam));
      }
    }
  }
  return SupremumSearch(sampler).maximize(objective, families);
}

inline double qs_constant_estimate(const PiecewiseMobiusHomeo& f, const SamplerConfig& sampler) {
  return qs_constant_search(f, sampler).value;
}

/// Outcome of the scaling-rigidity solver.
struct ScaleRecovery {
  double t = 1.0;           // unique t > 0 with e^{-t L} + e^{-t L_perp} = 1
  double ratio = 1.0;       // L2 / L1
  double ratio_perp = 1.0;  // L2_perp / L1_perp
  bool consistent = false;  // all three agree within tol
};

/// Given masses of Q and Q-perp under f1 and f2 with t L_{f1} = L_{f2} on both
/// boxes, recover t. Since both pairs satisfy the ortho identity, t solves
/// e^{-t L} + e^{-t L_perp} = 1, whose left side is strictly decreasing in t;
/// t = 1 is therefore the only solution.
inline ScaleRecovery recover_scale(double l1, double l1_perp, double l2, double l2_perp, double tol = 1e-9) {
  if (!(l1 > 0.0) || !(l1_perp > 0.0)) throw Error(ErrorCode::InvalidInput, "Liouville masses must be positive");
  auto h = [&](double t) { return std::exp(-t * l1) + std::exp(-t * l1_perp) - 1.0; };
  double lo = 1e-12, hi = 1.0;
  while (h(hi) > 0.0) hi *= 2.0;
  while (h(lo) < 0.0) lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  ScaleRecovery r;
  r.t = 0.5 * (lo + hi);
  r.ratio = l2 / l1;
  r.ratio_perp = l2_perp / l1_perp;
  r.consistent = std::abs(r.t - r.ratio) <= tol && std::abs(r.t - r.ratio_perp) <= tol;
  return r;
}

}  // namespace teich
