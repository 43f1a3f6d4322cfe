#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "support.hpp"
#include "teich/lab/random.hpp"
#include "teich/teich.hpp"

using namespace teich;
using std::numbers::pi;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

BoundaryPoint hp(double x) { return BoundaryPoint::from_halfplane(x); }

Geodesic up_axis() { return Geodesic(hp(0.0), hp(kInf)); }

}  // namespace

TEST(Earthquake, ZeroAmplitudeIsIdentity) {
  lab::Rng rng(50);
  auto f = lab::random_map(rng, 4);
  auto lam = lab::random_lamination(rng, 3);
  EXPECT_TRUE(class_equal(earthquake(f, lam, 0.0), f));
  EXPECT_TRUE(class_equal(elementary_earthquake(f, up_axis(), 0.0), f));
}

TEST(Earthquake, ReversedFaultGivesSameClass) {
  lab::Rng rng(51);
  for (int i = 0; i < 20; ++i) {
    auto f = lab::random_map(rng, 3);
    auto e = lab::spaced_angles(rng, 2, 0.1);
    Geodesic g = Geodesic::from_angles(e[0], e[1]);
    double t = lab::uniform(rng, 0.1, 3.0);
    EXPECT_TRUE(class_equal(elementary_earthquake(f, g, t), elementary_earthquake(f, reverse(g), t), 1e-8));
  }
}

TEST(Earthquake, SingleAtomIsElementary) {
  lab::Rng rng(52);
  auto f = lab::random_map(rng, 3);
  Geodesic g = Geodesic::from_angles(0.4, 2.9);
  MeasuredLamination lam(AtomicCurrent({{g, 1.5}}));
  EXPECT_TRUE(class_equal(earthquake(f, lam, 2.0), elementary_earthquake(f, g, 3.0), 1e-9));
}

TEST(Earthquake, SimultaneousMatchesSequential) {
  lab::Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    auto f = lab::random_map(rng, 3);
    auto lam = lab::random_lamination(rng, 4);
    double t = lab::uniform(rng, 0.1, 2.0);
    // Normalizing on a squeezed image triple costs a few digits for some draws.
    EXPECT_LT(class_deviation(earthquake(f, lam, t), earthquake_sequential(f, lam.atoms(), t)), 1e-7);
  }
}

TEST(Earthquake, SequentialRejectsCrossingAtoms) {
  std::vector<Atom> atoms{{Geodesic::from_angles(0, pi), 1.0}, {Geodesic::from_angles(pi / 2, 1.5 * pi), 1.0}};
  EXPECT_CODE(earthquake_sequential(PiecewiseMobiusHomeo(), atoms, 1.0), ErrorCode::NotALamination);
}

TEST(Earthquake, FlowProperty) {
  lab::Rng rng(54);
  auto f = lab::random_map(rng, 3);
  auto lam = lab::random_lamination(rng, 3);
  for (double s : {0.3, 0.7, 1.1})
    for (double t : {0.3, 0.7, 1.1})
      EXPECT_LT(class_deviation(earthquake(earthquake(f, lam, t), lam, s), earthquake(f, lam, s + t)), 1e-8)
          << s << ' ' << t;
}

TEST(Earthquake, LeftEarthquakeCheck) {
  lab::Rng rng(55);
  for (int i = 0; i < 20; ++i) {
    auto f = lab::random_map(rng, 3);
    auto a = lab::spaced_angles(rng, 4, 0.05);
    Box q = Box::from_angles(a[0], a[1], a[2], a[3]);
    MeasuredLamination lam(AtomicCurrent({{q.diagonal(), 1.0}}));
    EXPECT_TRUE(left_earthquake_check(f, earthquake(f, lam, 0.8), lam, {q}));
    EXPECT_FALSE(left_earthquake_check(f, earthquake(f, lam, -0.8), lam, {q}));
  }
  MeasuredLamination lam(AtomicCurrent({{Geodesic::from_angles(0.0, 3.0), 1.0}}));
  EXPECT_CODE(left_earthquake_check(PiecewiseMobiusHomeo(), PiecewiseMobiusHomeo(), lam,
                                    {Box::from_angles(0.0, 1.0, 2.0, 4.0)}),
              ErrorCode::BoxNotAligned);
}

TEST(Earthquake, DiagonalClosedForm) {
  // Q = [0, beta] x [inf, -1] and lambda = one unit atom on the diagonal 0 -> inf.
  for (double beta : {0.1, 1.0, 7.0})
    for (double t : {0.5, 1.0, 10.0, 100.0, 200.0}) {
      Box q(hp(0.0), hp(beta), hp(kInf), hp(-1.0));
      double got = LiouvillePullback(elementary_earthquake(PiecewiseMobiusHomeo(), up_axis(), t)).mass(q);
      double want = t + std::log(beta) + std::log1p(std::exp(-t) / beta);
      EXPECT_NEAR(got, want, 1e-9 * (1 + want)) << beta << ' ' << t;
    }
}

TEST(Earthquake, DiagonalBoundsStrict) {
  lab::Rng rng(56);
  for (int i = 0; i < 200; ++i) {
    auto f = lab::random_map(rng, 3);
    Box q = lab::random_box(rng, 0.05);
    auto b = diagonal_bounds_check(f, q, lab::uniform(rng, 0.1, 5.0));
    EXPECT_TRUE(b.strict()) << b.lower << ' ' << b.value << ' ' << b.upper;
  }
}

TEST(EarthquakeRay, SingleAtomErrorRate) {
  // Q generic with one atom crossing it: |L/t - 1| <= (|log beta| + log 2) / t.
  MeasuredLamination lam(AtomicCurrent({{up_axis(), 1.0}}));
  Box q(hp(-0.5), hp(2.0), hp(1e3), hp(-3.0));
  ASSERT_EQ(lam.mass(q), 1.0);
  std::vector<double> ts{1, 10, 100};
  auto rows = earthquake_ray_masses(PiecewiseMobiusHomeo(), lam, ts, {q});
  ASSERT_EQ(rows.size(), 3u);
  double bound_const = 0.0;
  for (double x : {0.5, 2.0, 1e3, 3.0}) bound_const = std::max(bound_const, std::abs(std::log(x)));
  for (const auto& r : rows) {
    EXPECT_EQ(r.target_mass, 1.0);
    EXPECT_LE(r.abs_err, (2 * bound_const + std::log(2.0)) / r.t);
  }
  EXPECT_LT(rows.back().abs_err, rows.front().abs_err);
}

TEST(EarthquakeRay, Validation) {
  MeasuredLamination lam(AtomicCurrent({{Geodesic::from_angles(1.0, 4.0), 1.0}}));
  Box ok = Box::from_angles(0.5, 2.0, 3.0, 5.0), bad = Box::from_angles(1.0, 2.0, 3.0, 5.0);
  EXPECT_CODE(earthquake_ray_masses(PiecewiseMobiusHomeo(), lam, {1.0}, {bad}), ErrorCode::NonGenericBox);
  EXPECT_CODE(earthquake_ray_masses(PiecewiseMobiusHomeo(), lam, {2.0, 1.0}, {ok}), ErrorCode::InvalidInput);
  EXPECT_CODE(earthquake_ray_masses(PiecewiseMobiusHomeo(), lam, {0.0}, {ok}), ErrorCode::InvalidInput);
}

TEST(Monotonicity, ClassificationAndSigns) {
  Box q = Box::from_angles(0.0, 1.0, 3.0, 4.0);
  EXPECT_EQ(classify(q, Geodesic::from_angles(0.5, 3.5)), MonotonicityCase::Crossing);
  EXPECT_EQ(classify(q, Geodesic::from_angles(2.0, 5.0)), MonotonicityCase::OrthoCrossing);
  EXPECT_EQ(classify(q, Geodesic::from_angles(0.2, 0.8)), MonotonicityCase::Same);
  EXPECT_CODE(classify(q, Geodesic::from_angles(0.5, 2.0)), ErrorCode::ConfigurationUnclassified);

  lab::Rng rng(57);
  PiecewiseMobiusHomeo f = lab::random_map(rng, 3);
  for (auto g : {Geodesic::from_angles(0.5, 3.5), Geodesic::from_angles(2.0, 5.0), Geodesic::from_angles(0.2, 0.8)})
    for (double t : {0.5, 2.0}) {
      auto r = monotonicity_probe(f, q, g, t);
      EXPECT_TRUE(r.expected_signs()) << to_string(r.config) << ' ' << r.d_tail << ' ' << r.d_head;
    }
}
