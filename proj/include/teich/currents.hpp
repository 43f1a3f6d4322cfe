#pragma once

// Geodesic currents seen through their masses on boxes.
//
// Atomic currents store unoriented geodesics: an atom of weight w puts mass w
// on g and mass w on its reversal. Every other measure in the library
// (Liouville pullbacks, signed combinations) plugs in through the BoxMeasure
// concept, so integrals of step functions and the seminorm estimators are
// written once.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <tuple>
#include <vector>

#include "teich/box.hpp"
#include "teich/sampler.hpp"

namespace teich {

template <class M>
concept BoxMeasure = requires(const M& m, const Box& q) {
  { m.mass(q) } -> std::convertible_to<double>;
};

struct Atom {
  Geodesic geodesic;
  double weight;
};

class AtomicCurrent {
 public:
  AtomicCurrent() = default;

  explicit AtomicCurrent(const std::vector<Atom>& atoms, double tol = kDefaultTol.point) {
    for (const auto& a : atoms) add(a, tol);
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  double total_weight() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
  }

  double mass(const Box& q) const {
    double s = 0.0;
    for (const auto& a : atoms_)
      if (box_contains(q, a.geodesic) || box_contains(q, a.geodesic.reversed())) s += a.weight;
    return s;
  }

  AtomicCurrent scaled(double factor) const {
    AtomicCurrent c = *this;
    for (auto& a : c.atoms_) a.weight *= factor;
    return c;
  }

 private:
  void add(const Atom& atom, double tol) {
    if (!(atom.weight > 0.0) || !std::isfinite(atom.weight))
      throw Error(ErrorCode::InvalidInput, "atom weights must be positive");
    for (auto& a : atoms_) {
      const auto& g = a.geodesic;
      const auto& h = atom.geodesic;
      bool same = coincident(g.tail(), h.tail(), tol) && coincident(g.head(), h.head(), tol);
      bool flipped = coincident(g.tail(), h.head(), tol) && coincident(g.head(), h.tail(), tol);
      if (same || flipped) {
        a.weight += atom.weight;
        return;
      }
    }
    atoms_.push_back(atom);
  }

  std::vector<Atom> atoms_;
};

inline double mass(const BoxMeasure auto& alpha, const Box& q) { return alpha.mass(q); }

/// No two atoms cross.
inline bool is_measured_lamination(const AtomicCurrent& alpha, double tol = kDefaultTol.point) {
  const auto& at = alpha.atoms();
  for (std::size_t i = 0; i < at.size(); ++i)
    for (std::size_t j = i + 1; j < at.size(); ++j)
      if (geodesics_cross(at[i].geodesic, at[j].geodesic, tol)) return false;
  return true;
}

/// An atomic current whose support geodesics pairwise do not cross.
class MeasuredLamination {
 public:
  MeasuredLamination() = default;

  explicit MeasuredLamination(AtomicCurrent current, double tol = kDefaultTol.point) : current_(std::move(current)) {
    if (!is_measured_lamination(current_, tol)) throw Error(ErrorCode::NotALamination, "support geodesics cross");
  }

  explicit MeasuredLamination(const std::vector<Atom>& atoms, double tol = kDefaultTol.point)
      : MeasuredLamination(AtomicCurrent(atoms, tol), tol) {}

  const std::vector<Atom>& atoms() const { return current_.atoms(); }
  const AtomicCurrent& current() const { return current_; }
  double mass(const Box& q) const { return current_.mass(q); }
  MeasuredLamination scaled(double factor) const { return MeasuredLamination(current_.scaled(factor)); }

 private:
  AtomicCurrent current_;
};

/// No atom endpoint sits on a corner of Q.
inline bool is_generic(const AtomicCurrent& alpha, const Box& q, double tol = kDefaultTol.point) {
  for (const auto& a : alpha.atoms())
    for (const auto& corner : q.corners())
      if (coincident(a.geodesic.tail(), corner, tol) || coincident(a.geodesic.head(), corner, tol)) return false;
  return true;
}

inline bool is_generic(const MeasuredLamination& alpha, const Box& q, double tol = kDefaultTol.point) {
  return is_generic(alpha.current(), q, tol);
}

template <BoxMeasure M>
bool is_generic(const M&, const Box&, double = kDefaultTol.point) {
  throw Error(ErrorCode::NotAtomic, "genericity is only decided for atomic currents");
}

/// Rotate every corner of Q by `jitter` until Q is generic for alpha.
inline Box make_generic(const AtomicCurrent& alpha, const Box& q, double jitter = 1e-6,
                        double tol = kDefaultTol.point) {
  Box out = q;
  for (int k = 1; !is_generic(alpha, out, tol) && k < 64; ++k) {
    const auto& c = q.corners();
    out = Box(BoundaryPoint(c[0].angle() + k * jitter), BoundaryPoint(c[1].angle() - k * jitter),
              BoundaryPoint(c[2].angle() + k * jitter), BoundaryPoint(c[3].angle() - k * jitter), 0.0);
  }
  return out;
}

/// xi = sum_i w_i * chi_{Q_i}
class StepFunction {
 public:
  struct Term {
    Box box;
    double weight;
  };

  StepFunction() = default;
  explicit StepFunction(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static StepFunction indicator(const Box& q) { return StepFunction({Term{q, 1.0}}); }

  const std::vector<Term>& terms() const { return terms_; }

  /// xi o psi^{-1}: the same weights on the image boxes psi(Q_i).
  StepFunction transported(const Mobius& psi) const {
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& term : terms_) t.push_back({image_box(psi, term.box), term.weight});
    return StepFunction(std::move(t));
  }

 private:
  std::vector<Term> terms_;
};

inline double integrate(const BoxMeasure auto& alpha, const StepFunction& xi) {
  double s = 0.0;
  for (const auto& t : xi.terms()) s += t.weight * alpha.mass(t.box);
  return s;
}

inline AtomicCurrent pushforward(const AtomicCurrent& alpha, const Mobius& phi) {
  std::vector<Atom> atoms;
  for (const auto& a : alpha.atoms()) atoms.push_back({apply(phi, a.geodesic), a.weight});
  return AtomicCurrent(atoms, 0.0);
}

/// alpha - beta as a signed box measure.
template <BoxMeasure A, BoxMeasure B>
class Difference {
 public:
  Difference(const A& a, const B& b) : a_(a), b_(b) {}
  double mass(const Box& q) const { return a_.mass(q) - b_.mass(q); }

 private:
  const A& a_;
  const B& b_;
};

/// |alpha|_xi = |integral of xi d alpha|
inline double weak_seminorm(const BoxMeasure auto& alpha, const StepFunction& xi) {
  return std::abs(integrate(alpha, xi));
}

/// Lower bound for ||alpha||_xi = sup_phi |integral of xi o phi d alpha|.
///
/// With xi o phi = sum w_i chi_{phi^{-1}(Q_i)}, sampling psi = phi^{-1} directly
/// is equivalent; the identity belongs to every default grid.
template <BoxMeasure M>
SupremumEstimate uniform_seminorm_search(const M& alpha, const StepFunction& xi, const SamplerConfig& sampler) {
  auto objective = [&](const Mobius& psi) {
    double s = 0.0;
    for (const auto& t : xi.terms()) s += t.weight * alpha.mass(image_box(psi, t.box));
    return std::abs(s);
  };
  auto est = estimate_supremum(objective, sampler);
  est.value = std::max(0.0, est.value);
  return est;
}

template <BoxMeasure M>
double uniform_seminorm_estimate(const M& alpha, const StepFunction& xi, const SamplerConfig& sampler) {
  return uniform_seminorm_search(alpha, xi, sampler).value;
}

/// sum_i 2^{-i} min{1, ||alpha - beta||_{xi_i}} over the supplied family.
///
/// Every term is evaluated on the plain grid of the sampler (refinement and
/// random samples are switched off) so that all pairs share one sample set; a
/// maximum over a common sample set is itself a seminorm, which keeps the
/// triangle inequality exact for the estimate.
template <BoxMeasure A, BoxMeasure B>
double current_metric_estimate(const A& alpha, const B& beta, const std::vector<StepFunction>& family,
                               const SamplerConfig& sampler) {
  if (family.empty()) throw Error(ErrorCode::EmptyFamily, "metric needs at least one test function");
  SamplerConfig grid = sampler;
  grid.refine_rounds = 0;
  grid.random_samples = 0;
  Difference<A, B> diff(alpha, beta);
  double total = 0.0, scale = 0.5;
  for (const auto& xi : family) {
    total += scale * std::min(1.0, uniform_seminorm_estimate(diff, xi, grid));
    scale *= 0.5;
  }
  return total;
}

}  // namespace teich
