#include <gtest/gtest.h>

#include "support.hpp"
#include "teich/json_io.hpp"
#include "teich/lab/random.hpp"

using namespace teich;
using nlohmann::json;

TEST(JsonIo, PointAndMobiusRoundTrip) {
  EXPECT_DOUBLE_EQ(io::point_from_json(io::to_json(BoundaryPoint(1.25))).angle(), 1.25);
  Mobius m(2, 1, 1, 1);
  EXPECT_EQ(io::mobius_from_json(io::to_json(m)).distance(m), 0.0);
  EXPECT_CODE(io::mobius_from_json(json::array({1, 0, 0})), ErrorCode::InvalidInput);
  EXPECT_CODE(io::mobius_from_json(json::array({1, 0, 0, -1})), ErrorCode::InvalidMobius);
  EXPECT_CODE(io::point_from_json(json("x")), ErrorCode::InvalidInput);
}

TEST(JsonIo, GeodesicBoxAndStep) {
  Geodesic g = Geodesic::from_angles(0.5, 2.0);
  EXPECT_TRUE(io::geodesic_from_json(io::to_json(g)) == g);
  Box q = Box::from_angles(0.1, 0.2, 3.0, 4.0);
  Box back = io::box_from_json(io::to_json(q));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.corners()[i].angle(), q.corners()[i].angle());
  EXPECT_CODE(io::box_from_json(json::array({0.1, 3.0, 0.2, 4.0})), ErrorCode::InvalidBox);
  StepFunction xi({{q, 2.0}, {Box::standard(), -1.0}});
  auto xi2 = io::step_from_json(io::to_json(xi));
  ASSERT_EQ(xi2.terms().size(), 2u);
  EXPECT_EQ(xi2.terms()[1].weight, -1.0);
  EXPECT_CODE(io::geodesic_from_json(json{{"tail", 1.0}}), ErrorCode::InvalidInput);
}

TEST(JsonIo, CurrentsAndLaminations) {
  lab::Rng rng(60);
  auto lam = lab::random_lamination(rng, 5);
  auto back = io::lamination_from_json(io::lamination_to_json(lam));
  ASSERT_EQ(back.atoms().size(), lam.atoms().size());
  for (std::size_t i = 0; i < lam.atoms().size(); ++i) {
    EXPECT_TRUE(back.atoms()[i].geodesic == lam.atoms()[i].geodesic);
    EXPECT_EQ(back.atoms()[i].weight, lam.atoms()[i].weight);
  }
  EXPECT_EQ(io::current_from_json(io::to_json(lam.current())).atoms().size(), 5u);
  json crossing = json::parse(R"({"atoms": [{"tail": 0, "head": 3.14}, {"tail": 1.5, "head": 4.7}]})");
  EXPECT_CODE(io::lamination_from_json(crossing), ErrorCode::InvalidInput);
  crossing["atoms"][0]["weight"] = 1;
  crossing["atoms"][1]["weight"] = 1;
  EXPECT_CODE(io::lamination_from_json(crossing), ErrorCode::NotALamination);
  EXPECT_CODE(io::current_from_json(json::parse(R"([{"tail": 0, "head": 1, "weight": 0}])")), ErrorCode::InvalidInput);
}

TEST(JsonIo, MapRoundTripAndPieceErrors) {
  lab::Rng rng(61);
  auto f = lab::random_map(rng, 4).materialized();
  auto g = io::map_from_json(io::to_json(f));
  EXPECT_EQ(g.size(), f.size());
  for (const auto& p : quasi_uniform_points(100)) EXPECT_NEAR(g.apply(p).angle(), f.apply(p).angle(), 1e-12);

  json bad = io::to_json(f);
  bad["pieces"][1] = json::array({1, 0, 0, -1});
  try {
    io::map_from_json(bad);
    ADD_FAILURE() << "bad piece accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMobius);
    EXPECT_NE(std::string(e.what()).find("piece 1"), std::string::npos) << e.what();
  }
  json global = json::parse(R"({"breaks": [], "pieces": [[1, 0, 0, 1]]})");
  EXPECT_TRUE(io::map_from_json(global).is_global());
}

TEST(JsonIo, Sampler) {
  SamplerConfig c = io::sampler_from_json(json::parse(R"({"rotations": 8, "levels": 2, "seed": 9})"));
  EXPECT_EQ(c.rotations, 8);
  EXPECT_EQ(c.levels, 2);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.shear_steps, SamplerConfig{}.shear_steps);
  EXPECT_CODE(io::sampler_from_json(json::parse(R"({"rotations": 0})")), ErrorCode::InvalidInput);
  EXPECT_EQ(io::sampler_from_json(io::to_json(c)).levels, 2);
}
