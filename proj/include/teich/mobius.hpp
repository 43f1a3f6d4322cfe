#pragma once

// Boundary points, Mobius maps and geodesics of the hyperbolic plane.
//
// Points of the circle at infinity are stored as angles on the unit circle.
// The upper half-plane is reached through the Cayley transform
// z = i(1 - w)/(1 + w), which on the boundary reads x = tan(theta/2).
// Internally a point is also handled as the homogeneous vector
// (sin(theta/2), cos(theta/2)) so that x = v[0]/v[1] and infinity is (1, 0);
// Mobius maps act on those vectors by plain 2x2 real matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "teich/error.hpp"
#include "teich/tolerance.hpp"

namespace teich {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2pi).
inline double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Counterclockwise arc length from `from` to `to`, in [0, 2pi).
inline double ccw_distance(double from, double to) { return wrap_angle(to - from); }

/// Length of the shorter arc between two angles.
inline double circular_distance(double x, double y) {
  double d = ccw_distance(x, y);
  return std::min(d, kTwoPi - d);
}

/// Homogeneous coordinates of a boundary point in the half-plane chart.
struct Vec2 {
  double x = 0.0;
  double y = 1.0;
};

inline double det(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }

class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double theta) : theta_(wrap_angle(theta)) {}

  static BoundaryPoint from_angle(double theta) { return BoundaryPoint(theta); }

  /// Real coordinate in the half-plane chart; +infinity stands for the point at infinity.
  static BoundaryPoint from_halfplane(double x) {
    if (std::isinf(x)) return BoundaryPoint(std::numbers::pi);
    return BoundaryPoint(2.0 * std::atan(x));
  }

  static BoundaryPoint from_vec(const Vec2& v) { return BoundaryPoint(2.0 * std::atan2(v.x, v.y)); }

  double angle() const { return theta_; }

  double halfplane() const {
    if (theta_ == std::numbers::pi) return std::numeric_limits<double>::infinity();
    return std::tan(0.5 * theta_);
  }

  Vec2 vec() const { return {std::sin(0.5 * theta_), std::cos(0.5 * theta_)}; }

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  double theta_ = 0.0;
};

inline bool coincident(const BoundaryPoint& p, const BoundaryPoint& q, double tol = kDefaultTol.point) {
  return circular_distance(p.angle(), q.angle()) < tol;
}

/// True when p lies strictly inside the counterclockwise arc (from, to), away from both ends by tol.
inline bool in_open_arc(const BoundaryPoint& from, const BoundaryPoint& to, const BoundaryPoint& p,
                        double tol = kDefaultTol.point) {
  if (coincident(p, from, tol) || coincident(p, to, tol)) return false;
  return ccw_distance(from.angle(), p.angle()) < ccw_distance(from.angle(), to.angle());
}

/// Closed counterclockwise arc [from, to]; endpoints count within tol.
inline bool in_closed_arc(const BoundaryPoint& from, const BoundaryPoint& to, const BoundaryPoint& p,
                          double tol = kDefaultTol.point) {
  if (coincident(p, from, tol) || coincident(p, to, tol)) return true;
  return ccw_distance(from.angle(), p.angle()) < ccw_distance(from.angle(), to.angle());
}

/// Strict counterclockwise order of three distinct points.
inline bool is_ccw(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& r) {
  return ccw_distance(p.angle(), q.angle()) < ccw_distance(p.angle(), r.angle());
}

/// Orientation-preserving isometry acting on the half-plane chart by
/// z -> (m11 z + m12) / (m21 z + m22), kept with determinant one.
///
/// Products and inverses of determinant-one matrices are formed without
/// renormalizing: for strongly hyperbolic maps the computed determinant is
/// dominated by cancellation error. Matrices whose entries exceed 1e150 are
/// rescaled, and then only their projective action is meaningful.
class Mobius {
 public:
  Mobius() = default;

  /// Arbitrary real matrix with positive determinant, rescaled to determinant one.
  Mobius(double a, double b, double c, double d) : m_{a, b, c, d} { normalize(); }

  /// Matrix already known to have determinant one.
  static Mobius unchecked(double a, double b, double c, double d) {
    Mobius m;
    m.m_ = {a, b, c, d};
    double big = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (big > 1e150)
      for (double& x : m.m_) x /= big;
    return m;
  }

  static Mobius identity() { return {}; }

  /// z -> z + s in the half-plane chart.
  static Mobius shear(double s) { return unchecked(1.0, s, 0.0, 1.0); }

  /// z -> e^s z in the half-plane chart.
  static Mobius dilation(double s) { return unchecked(std::exp(0.5 * s), 0.0, 0.0, std::exp(-0.5 * s)); }

  /// Rotation of the disk by the angle phi (theta -> theta + phi on the boundary).
  static Mobius rotation(double phi) {
    double c = std::cos(0.5 * phi);
    double s = std::sin(0.5 * phi);
    return unchecked(c, s, -s, c);
  }

  const std::array<double, 4>& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }
  double determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  Vec2 apply(const Vec2& v) const { return {m_[0] * v.x + m_[1] * v.y, m_[2] * v.x + m_[3] * v.y}; }

  BoundaryPoint apply(const BoundaryPoint& p) const { return BoundaryPoint::from_vec(apply(p.vec())); }

  Mobius inverse() const { return unchecked(m_[3], -m_[1], -m_[2], m_[0]); }

  friend Mobius operator*(const Mobius& p, const Mobius& q) {
    return unchecked(p.m_[0] * q.m_[0] + p.m_[1] * q.m_[2], p.m_[0] * q.m_[1] + p.m_[1] * q.m_[3],
                  p.m_[2] * q.m_[0] + p.m_[3] * q.m_[2], p.m_[2] * q.m_[1] + p.m_[3] * q.m_[3]);
  }

  /// Largest entry deviation from `other`, up to the sign ambiguity of PSL(2,R).
  double distance(const Mobius& other) const {
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      plus = std::max(plus, std::abs(m_[i] - other.m_[i]));
      minus = std::max(minus, std::abs(m_[i] + other.m_[i]));
    }
    return std::min(plus, minus);
  }

 private:
  void normalize() {
    double d = determinant();
    if (!(d > 0.0) || !std::isfinite(d)) throw Error(ErrorCode::InvalidMobius, "determinant must be positive");
    double s = 1.0 / std::sqrt(d);
    for (double& x : m_) x *= s;
  }

  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

/// Oriented geodesic from tail to head.
class Geodesic {
 public:
  Geodesic(BoundaryPoint tail, BoundaryPoint head, double tol = kDefaultTol.point)
      : tail_(tail), head_(head) {
    if (coincident(tail, head, tol)) throw Error(ErrorCode::InvalidGeodesic, "endpoints coincide");
  }

  static Geodesic from_angles(double tail, double head) {
    return Geodesic(BoundaryPoint(tail), BoundaryPoint(head));
  }

  const BoundaryPoint& tail() const { return tail_; }
  const BoundaryPoint& head() const { return head_; }

  Geodesic reversed() const { return Geodesic(head_, tail_, 0.0); }

  friend bool operator==(const Geodesic&, const Geodesic&) = default;

 private:
  BoundaryPoint tail_;
  BoundaryPoint head_;
};

inline Geodesic reverse(const Geodesic& g) { return g.reversed(); }

inline Geodesic apply(const Mobius& m, const Geodesic& g) {
  return Geodesic(m.apply(g.tail()), m.apply(g.head()), 0.0);
}

inline BoundaryPoint apply(const Mobius& m, const BoundaryPoint& p) { return m.apply(p); }
inline Mobius compose(const Mobius& outer, const Mobius& inner) { return outer * inner; }
inline Mobius invert(const Mobius& m) { return m.inverse(); }

/// Hyperbolic translation of signed length t along an axis given by homogeneous
/// endpoint vectors. Vectors are moved through the eigenbasis of the translation,
/// so an endpoint vector is mapped exactly onto a multiple of itself even when
/// e^t is far beyond double precision of the materialized matrix.
class AxisTranslation {
 public:
  AxisTranslation(Vec2 tail, Vec2 head, double t) : tail_(tail), head_(head), t_(t) {
    span_ = teich::det(head_, tail_);
    if (span_ == 0.0 || !std::isfinite(span_)) throw Error(ErrorCode::InvalidGeodesic, "degenerate axis");
  }

  double length() const { return t_; }

  AxisTranslation inverse() const { return AxisTranslation(tail_, head_, -t_); }

  Vec2 apply(const Vec2& v) const {
    // v = s*head + r*tail
    double s = teich::det(v, tail_) / span_;
    double r = teich::det(head_, v) / span_;
    double up = std::exp(0.5 * t_);
    double down = std::exp(-0.5 * t_);
    return {up * s * head_.x + down * r * tail_.x, up * s * head_.y + down * r * tail_.y};
  }

  Mobius matrix() const {
    // C diag(e^{t/2}, e^{-t/2}) C^{-1} with C = [head | tail]
    double up = std::exp(0.5 * t_);
    double down = std::exp(-0.5 * t_);
    const Vec2& h = head_;
    const Vec2& l = tail_;
    double inv = 1.0 / span_;
    double a = (up * h.x * l.y - down * l.x * h.y) * inv;
    double b = (-up * h.x * l.x + down * l.x * h.x) * inv;
    double c = (up * h.y * l.y - down * l.y * h.y) * inv;
    double d = (-up * h.y * l.x + down * l.y * h.x) * inv;
    return Mobius::unchecked(a, b, c, d);
  }

 private:
  Vec2 tail_;
  Vec2 head_;
  double t_;
  double span_;
};

/// The Mobius map fixing both ends of g and translating by t in the direction tail -> head.
inline Mobius translation_along(const Geodesic& g, double t) {
  return AxisTranslation(g.tail().vec(), g.head().vec(), t).matrix();
}

/// The unique Mobius map sending src[i] to dst[i].
inline Mobius mobius_from_triples(const std::array<BoundaryPoint, 3>& src, const std::array<BoundaryPoint, 3>& dst,
                                  double tol = kDefaultTol.point) {
  auto check = [tol](const std::array<BoundaryPoint, 3>& p) {
    if (coincident(p[0], p[1], tol) || coincident(p[1], p[2], tol) || coincident(p[0], p[2], tol))
      throw Error(ErrorCode::DegenerateTriple, "triple has coincident points");
    return is_ccw(p[0], p[1], p[2]);
  };
  if (check(src) != check(dst)) throw Error(ErrorCode::OrientationMismatch, "triples have opposite orientation");

  // Matrix sending (p1, p2, p3) to (0, 1, infinity); orientation preserving for ccw triples.
  auto to_standard = [](const std::array<BoundaryPoint, 3>& p) {
    Vec2 v1 = p[0].vec(), v2 = p[1].vec(), v3 = p[2].vec();
    double k1 = det(v2, v3);
    double k2 = det(v2, v1);
    return std::array<double, 4>{k1 * v1.y, -k1 * v1.x, k2 * v3.y, -k2 * v3.x};
  };
  auto s = to_standard(src);
  auto t = to_standard(dst);
  // For clockwise triples both matrices reverse orientation; their quotient does not.
  // The adjugate stands in for the inverse (projective maps ignore scalars).
  auto inv_t = std::array<double, 4>{t[3], -t[1], -t[2], t[0]};
  double a = inv_t[0] * s[0] + inv_t[1] * s[2];
  double b = inv_t[0] * s[1] + inv_t[1] * s[3];
  double c = inv_t[2] * s[0] + inv_t[3] * s[2];
  double d = inv_t[2] * s[1] + inv_t[3] * s[3];
  return Mobius(a, b, c, d);
}

/// (a-c)(b-d) / ((a-d)(b-c)) for four boundary points.
///
/// Each chord a - c equals 2i e^{i(a+c)/2} sin((a-c)/2); the phases cancel in
/// the ratio, leaving a product of half-angle sines with no pole anywhere on
/// the circle.
inline double crossratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                         const BoundaryPoint& d, double tol = kDefaultTol.point) {
  const BoundaryPoint* pts[4] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (coincident(*pts[i], *pts[j], tol)) throw Error(ErrorCode::DegeneratePoints, "crossratio points coincide");
  Vec2 va = a.vec(), vb = b.vec(), vc = c.vec(), vd = d.vec();
  return (det(va, vc) * det(vb, vd)) / (det(va, vd) * det(vb, vc));
}

/// The same crossratio in the half-plane chart; infinite coordinates are handled
/// by dropping the two factors that contain them.
inline double crossratio_halfplane(double a, double b, double c, double d) {
  auto diff = [](double x, double y) {
    if (std::isinf(x) && std::isinf(y)) throw Error(ErrorCode::DegeneratePoints, "two points at infinity");
    if (std::isinf(x)) return 1.0;
    if (std::isinf(y)) return -1.0;
    return x - y;
  };
  if (a == b || a == c || a == d || b == c || b == d || c == d)
    throw Error(ErrorCode::DegeneratePoints, "crossratio points coincide");
  return (diff(a, c) * diff(b, d)) / (diff(a, d) * diff(b, c));
}

enum class Side { Left, Right };

/// Left of tail -> head is the open counterclockwise arc (head, tail).
inline Side side_of(const Geodesic& g, const BoundaryPoint& p, double tol = kDefaultTol.point) {
  if (coincident(p, g.tail(), tol) || coincident(p, g.head(), tol))
    throw Error(ErrorCode::PointOnGeodesicEndpoint, "point is an endpoint of the geodesic");
  return in_open_arc(g.head(), g.tail(), p, 0.0) ? Side::Left : Side::Right;
}

inline bool shares_endpoint(const Geodesic& g1, const Geodesic& g2, double tol = kDefaultTol.point) {
  return coincident(g1.tail(), g2.tail(), tol) || coincident(g1.tail(), g2.head(), tol) ||
         coincident(g1.head(), g2.tail(), tol) || coincident(g1.head(), g2.head(), tol);
}

/// Transverse intersection: endpoints interleave on the circle.
inline bool geodesics_cross(const Geodesic& g1, const Geodesic& g2, double tol = kDefaultTol.point) {
  if (shares_endpoint(g1, g2, tol)) return false;
  bool t_in = in_open_arc(g1.tail(), g1.head(), g2.tail(), tol);
  bool h_in = in_open_arc(g1.tail(), g1.head(), g2.head(), tol);
  return t_in != h_in;
}

}  // namespace teich
