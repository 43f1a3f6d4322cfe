#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "support.hpp"
#include "teich/box.hpp"
#include "teich/lab/random.hpp"

using namespace teich;
using std::numbers::pi;

namespace {

BoundaryPoint hp(double x) { return BoundaryPoint::from_halfplane(x); }
const double kInf = std::numeric_limits<double>::infinity();

Box hp_box(double a, double b, double c, double d) { return Box(hp(a), hp(b), hp(c), hp(d)); }

}  // namespace

TEST(Box, RejectsBadCorners) {
  EXPECT_CODE(Box::from_angles(0, 1, 1, 2), ErrorCode::InvalidBox);
  EXPECT_CODE(Box::from_angles(0, 2, 1, 3), ErrorCode::InvalidBox);
  EXPECT_NO_THROW(Box::from_angles(5, 6, 0.5, 1));
}

TEST(Box, LiouvilleMassExamples) {
  EXPECT_NEAR(liouville_mass(Box::standard()), std::log(2.0), 1e-12);
  EXPECT_NEAR(liouville_mass(hp_box(0, 1, kInf, -1)), std::log(2.0), 1e-12);
  EXPECT_NEAR(liouville_mass(hp_box(0, 3, kInf, -1)), std::log(4.0), 1e-12);
}

TEST(Box, OrthoExamples) {
  Box q = Box::standard();
  Box p = ortho(q);
  EXPECT_NEAR(p.a().angle(), pi / 2, 1e-15);
  EXPECT_NEAR(p.d().angle(), 0.0, 1e-15);
  EXPECT_NEAR(liouville_mass(p), std::log(2.0), 1e-12);
  Box pp = ortho(ortho(q));
  EXPECT_NEAR(pp.a().angle(), q.c().angle(), 1e-15);
  EXPECT_NEAR(liouville_mass(pp), liouville_mass(q), 1e-12);
  Box four = hp_box(0, 3, kInf, -1);
  double direct = std::log(oracle::crossratio_line(3, kInf, -1, 0));
  EXPECT_NEAR(liouville_mass(ortho(four)), std::log(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(direct, std::log(4.0 / 3.0), 1e-12);
}

TEST(Box, OrthoIdentityRandom) {
  lab::Rng rng(20);
  for (int i = 0; i < 10000; ++i) {
    Box q = lab::random_box(rng);
    double r = std::exp(-liouville_mass(q)) + std::exp(-liouville_mass(ortho(q))) - 1.0;
    EXPECT_LT(std::abs(r), 1e-9);
    EXPECT_GT(liouville_mass(q), 0.0);
  }
}

TEST(Box, Symmetric) {
  EXPECT_TRUE(is_symmetric(Box::standard(), 1e-12));
  EXPECT_FALSE(is_symmetric(hp_box(0, 3, kInf, -1), 1e-6));
  lab::Rng rng(21);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(is_symmetric(image_box(lab::random_mobius(rng, 4.0), Box::standard()), 1e-9));
}

TEST(Box, SymmetricBoxesAreImagesOfTheStandardBox) {
  lab::Rng rng(22);
  Box s = Box::standard();
  for (int i = 0; i < 300; ++i) {
    auto a = lab::spaced_angles(rng, 3, 0.05);
    // Fourth corner making the crossratio 2, computed on the line.
    double x[3] = {oracle::to_line(a[0]), oracle::to_line(a[1]), oracle::to_line(a[2])};
    double d = (2 * x[0] * (x[1] - x[2]) - x[1] * (x[0] - x[2])) / (2 * (x[1] - x[2]) - (x[0] - x[2]));
    Box q{BoundaryPoint(a[0]), BoundaryPoint(a[1]), BoundaryPoint(a[2]), hp(d)};
    ASSERT_TRUE(is_symmetric(q, 1e-9));
    std::array<BoundaryPoint, 3> src{q.a(), q.b(), q.c()}, dst{s.a(), s.b(), s.c()};
    Mobius m = mobius_from_triples(src, dst);
    EXPECT_LT(circular_distance(m.apply(q.d()).angle(), s.d().angle()), 1e-7);
  }
}

TEST(Box, ImageBox) {
  Box q = hp_box(0, 1, kInf, -1);
  Box img = image_box(Mobius(std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)), q);
  EXPECT_NEAR(img.b().halfplane(), 2.0, 1e-12);
  EXPECT_NEAR(img.d().halfplane(), -2.0, 1e-12);
  EXPECT_NEAR(liouville_mass(img), std::log(2.0), 1e-12);
  lab::Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    Box r = lab::random_box(rng, 1e-2);
    EXPECT_NEAR(liouville_mass(image_box(lab::random_mobius(rng, 1.0), r)), liouville_mass(r),
                1e-9 * (1 + liouville_mass(r)));
    Box same = image_box(Mobius(), r);
    EXPECT_NEAR(same.c().angle(), r.c().angle(), 1e-15);
  }
}

TEST(Box, Contains) {
  Box q = Box::from_angles(0.0, 1.0, 3.0, 4.0);
  EXPECT_TRUE(box_contains(q, q.diagonal()));
  EXPECT_FALSE(box_contains(q, reverse(q.diagonal())));
  EXPECT_TRUE(box_contains(ortho(ortho(q)), reverse(q.diagonal())));
  EXPECT_FALSE(box_contains(q, Geodesic::from_angles(1.5, 2.5)));
}

TEST(Box, MassMonotoneUnderInclusion) {
  lab::Rng rng(24);
  for (int i = 0; i < 2000; ++i) {
    Box q = lab::random_box(rng, 0.05);
    auto shrink = [&](const BoundaryPoint& from, const BoundaryPoint& to) {
      double len = ccw_distance(from.angle(), to.angle());
      double u = lab::uniform(rng, 0.0, 0.45), v = lab::uniform(rng, 0.0, 0.45);
      return std::pair{BoundaryPoint(from.angle() + u * len), BoundaryPoint(to.angle() - v * len)};
    };
    auto [a, b] = shrink(q.a(), q.b());
    auto [c, d] = shrink(q.c(), q.d());
    Box inner(a, b, c, d);
    ASSERT_TRUE(box_within(inner, q));
    EXPECT_LE(liouville_mass(inner), liouville_mass(q) + 1e-12);
  }
}
