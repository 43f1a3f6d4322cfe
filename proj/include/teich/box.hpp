#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "teich/mobius.hpp"

namespace teich {

/// The box [a,b] x [c,d] of geodesics with tail in [a,b] and head in [c,d];
/// corners are distinct and counterclockwise.
class Box {
 public:
  Box(BoundaryPoint a, BoundaryPoint b, BoundaryPoint c, BoundaryPoint d, double tol = kDefaultTol.point)
      : corners_{a, b, c, d} {
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        if (coincident(corners_[i], corners_[j], tol)) throw Error(ErrorCode::InvalidBox, "box corners coincide");
    double ab = ccw_distance(a.angle(), b.angle());
    double ac = ccw_distance(a.angle(), c.angle());
    double ad = ccw_distance(a.angle(), d.angle());
    if (!(ab < ac && ac < ad)) throw Error(ErrorCode::InvalidBox, "box corners are not counterclockwise");
  }

  static Box from_angles(double a, double b, double c, double d) {
    return Box(BoundaryPoint(a), BoundaryPoint(b), BoundaryPoint(c), BoundaryPoint(d));
  }

  /// [1, i] x [-1, -i] on the unit circle.
  static Box standard() {
    using std::numbers::pi;
    return from_angles(0.0, 0.5 * pi, pi, 1.5 * pi);
  }

  const BoundaryPoint& a() const { return corners_[0]; }
  const BoundaryPoint& b() const { return corners_[1]; }
  const BoundaryPoint& c() const { return corners_[2]; }
  const BoundaryPoint& d() const { return corners_[3]; }
  const std::array<BoundaryPoint, 4>& corners() const { return corners_; }

  /// The geodesic a -> c.
  Geodesic diagonal() const { return Geodesic(a(), c(), 0.0); }

 private:
  std::array<BoundaryPoint, 4> corners_;
};

/// Liouville mass log crossratio(a, b, c, d).
inline double liouville_mass(const Box& q) { return std::log(crossratio(q.a(), q.b(), q.c(), q.d())); }

/// Q-perp = [b,c] x [d,a].
inline Box ortho(const Box& q) { return Box(q.b(), q.c(), q.d(), q.a(), 0.0); }

inline bool is_symmetric(const Box& q, double tol = kDefaultTol.compare) {
  return std::abs(liouville_mass(q) - std::log(2.0)) <= tol;
}

inline Box image_box(const Mobius& phi, const Box& q) {
  return Box(phi.apply(q.a()), phi.apply(q.b()), phi.apply(q.c()), phi.apply(q.d()), 0.0);
}

/// Tail in the closed arc [a,b] and head in the closed arc [c,d].
inline bool box_contains(const Box& q, const Geodesic& g, double tol = kDefaultTol.point) {
  return in_closed_arc(q.a(), q.b(), g.tail(), tol) && in_closed_arc(q.c(), q.d(), g.head(), tol);
}

/// Arc containment Q' subset Q.
inline bool box_within(const Box& inner, const Box& outer, double tol = kDefaultTol.point) {
  return in_closed_arc(outer.a(), outer.b(), inner.a(), tol) && in_closed_arc(outer.a(), outer.b(), inner.b(), tol) &&
         ccw_distance(inner.a().angle(), inner.b().angle()) <= ccw_distance(outer.a().angle(), outer.b().angle()) + tol &&
         in_closed_arc(outer.c(), outer.d(), inner.c(), tol) && in_closed_arc(outer.c(), outer.d(), inner.d(), tol) &&
         ccw_distance(inner.c().angle(), inner.d().angle()) <= ccw_distance(outer.c().angle(), outer.d().angle()) + tol;
}

}  // namespace teich
