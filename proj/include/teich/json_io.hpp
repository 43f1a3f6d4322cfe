#pragma once

// JSON encodings of the library types (nlohmann/json).
//
//   point        angle in radians
//   mobius       [m11, m12, m21, m22] row-major, half-plane chart
//   geodesic     {"tail": angle, "head": angle}
//   box          [a, b, c, d] angles
//   current      [{"tail", "head", "weight"}, ...]; laminations may also be {"atoms": [...]}
//   step         [{"box": [a,b,c,d], "weight": w}, ...]
//   map          {"breaks": [angles], "pieces": [mobius, ...]}
//   sampler      {"rotations", "dilation_range", "dilation_steps", "shear_range",
//                 "shear_steps", "refine_rounds", "seed", "levels", "random_samples"}

#include <string>
#include <vector>

#include <json.hpp>

#include "teich/boundary_map.hpp"
#include "teich/currents.hpp"
#include "teich/sampler.hpp"

namespace teich::io {

using nlohmann::json;

namespace detail {

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidInput, what + " must be a number");
  return j.get<double>();
}

inline const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::InvalidInput, what + " is missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

inline json to_json(const BoundaryPoint& p) { return p.angle(); }
inline BoundaryPoint point_from_json(const json& j) { return BoundaryPoint(detail::number(j, "point")); }

inline json to_json(const Mobius& m) {
  const auto& a = m.matrix();
  return json::array({a[0], a[1], a[2], a[3]});
}

inline Mobius mobius_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidInput, "mobius must be an array of 4 numbers");
  return Mobius(detail::number(j[0], "mobius entry"), detail::number(j[1], "mobius entry"),
                detail::number(j[2], "mobius entry"), detail::number(j[3], "mobius entry"));
}

inline json to_json(const Geodesic& g) { return {{"tail", g.tail().angle()}, {"head", g.head().angle()}}; }

inline Geodesic geodesic_from_json(const json& j) {
  return Geodesic(point_from_json(detail::field(j, "tail", "geodesic")),
                  point_from_json(detail::field(j, "head", "geodesic")));
}

inline json to_json(const Box& q) {
  return json::array({q.a().angle(), q.b().angle(), q.c().angle(), q.d().angle()});
}

inline Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidInput, "box must be an array of 4 angles");
  return Box(point_from_json(j[0]), point_from_json(j[1]), point_from_json(j[2]), point_from_json(j[3]));
}

inline json to_json(const AtomicCurrent& c) {
  json out = json::array();
  for (const auto& a : c.atoms())
    out.push_back({{"tail", a.geodesic.tail().angle()}, {"head", a.geodesic.head().angle()}, {"weight", a.weight}});
  return out;
}

inline std::vector<Atom> atoms_from_json(const json& j) {
  const json& list = j.is_object() ? detail::field(j, "atoms", "current") : j;
  if (!list.is_array()) throw Error(ErrorCode::InvalidInput, "current must be a list of atoms");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& a = list[i];
    std::string what = "atom " + std::to_string(i);
    atoms.push_back({Geodesic(point_from_json(detail::field(a, "tail", what)),
                              point_from_json(detail::field(a, "head", what))),
                     detail::number(detail::field(a, "weight", what), what + " weight")});
  }
  return atoms;
}

inline AtomicCurrent current_from_json(const json& j) { return AtomicCurrent(atoms_from_json(j)); }
inline MeasuredLamination lamination_from_json(const json& j) { return MeasuredLamination(atoms_from_json(j)); }

inline json lamination_to_json(const MeasuredLamination& l) { return {{"atoms", to_json(l.current())}}; }

inline json to_json(const StepFunction& xi) {
  json out = json::array();
  for (const auto& t : xi.terms()) out.push_back({{"box", to_json(t.box)}, {"weight", t.weight}});
  return out;
}

inline StepFunction step_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "step function must be a list of terms");
  std::vector<StepFunction::Term> terms;
  for (const auto& t : j)
    terms.push_back({box_from_json(detail::field(t, "box", "step term")),
                     detail::number(detail::field(t, "weight", "step term"), "step weight")});
  return StepFunction(std::move(terms));
}

inline json to_json(const PiecewiseMobiusHomeo& f) {
  json breaks = json::array(), pieces = json::array();
  for (const auto& p : f.breaks()) breaks.push_back(p.angle());
  for (const auto& m : f.pieces()) pieces.push_back(to_json(m));
  return {{"breaks", breaks}, {"pieces", pieces}};
}

/// Validation failures name the offending piece.
inline PiecewiseMobiusHomeo map_from_json(const json& j) {
  const json& b = detail::field(j, "breaks", "map");
  const json& p = detail::field(j, "pieces", "map");
  if (!b.is_array() || !p.is_array()) throw Error(ErrorCode::InvalidInput, "map breaks and pieces must be arrays");
  std::vector<BoundaryPoint> breaks;
  std::vector<Mobius> pieces;
  for (const auto& x : b) breaks.push_back(point_from_json(x));
  for (std::size_t i = 0; i < p.size(); ++i) {
    try {
      pieces.push_back(mobius_from_json(p[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "piece " + std::to_string(i) + ": " + e.what());
    }
  }
  return PiecewiseMobiusHomeo(std::move(breaks), std::move(pieces));
}

inline json to_json(const SamplerConfig& c) {
  return {{"rotations", c.rotations},         {"dilation_range", c.dilation_range}, {"dilation_steps", c.dilation_steps},
          {"shear_range", c.shear_range},     {"shear_steps", c.shear_steps},       {"refine_rounds", c.refine_rounds},
          {"seed", c.seed},                   {"levels", c.levels},                 {"random_samples", c.random_samples}};
}

inline SamplerConfig sampler_from_json(const json& j, SamplerConfig c = {}) {
  if (j.is_null()) return c;
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "sampler must be an object");
  auto get_int = [&](const char* k, int& v) {
    if (j.contains(k)) v = j.at(k).get<int>();
  };
  auto get_num = [&](const char* k, double& v) {
    if (j.contains(k)) v = detail::number(j.at(k), k);
  };
  get_int("rotations", c.rotations);
  get_num("dilation_range", c.dilation_range);
  get_int("dilation_steps", c.dilation_steps);
  get_num("shear_range", c.shear_range);
  get_int("shear_steps", c.shear_steps);
  get_int("refine_rounds", c.refine_rounds);
  get_int("levels", c.levels);
  get_int("random_samples", c.random_samples);
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (c.rotations < 1 || c.dilation_steps < 1 || c.shear_steps < 1 || c.levels < 1 || c.refine_rounds < 0)
    throw Error(ErrorCode::InvalidInput, "sampler grid sizes must be positive");
  return c;
}

}  // namespace teich::io
