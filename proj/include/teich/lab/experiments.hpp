#pragma once

// Batch experiments behind the `lab` command. Each experiment reads one JSON
// document, fills CSV tables and counts passed/failed checks against the
// shared thresholds. Configuration keys are documented in docs/config.md.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teich/json_io.hpp"
#include "teich/lab/csv.hpp"
#include "teich/lab/random.hpp"
#include "teich/lab/thresholds.hpp"

namespace teich::lab {

using nlohmann::json;

struct RunOptions {
  std::uint64_t seed = 1;
  std::optional<double> tol;  // overrides the experiment's main threshold
  SamplerConfig sampler;
};

struct Outcome {
  std::vector<Table> tables;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::vector<std::string> notes;
  std::vector<std::string> timings;  // wall-clock notes, kept out of the deterministic summary

  bool check(bool ok) {
    (ok ? passed : failed) += 1;
    return ok;
  }
  bool ok() const { return failed == 0; }
};

namespace detail {

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidInput, std::string("config key \"") + key + "\" has the wrong type");
  }
}

inline std::vector<double> doubles_or(const json& cfg, const char* key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& arr = cfg.at(key);
  if (!arr.is_array()) throw Error(ErrorCode::InvalidInput, std::string("config key \"") + key + "\" must be a list");
  std::vector<double> out;
  for (const auto& v : arr) out.push_back(io::detail::number(v, key));
  return out;
}

inline std::vector<Cell> box_cells(const Box& q) {
  return {q.a().angle(), q.b().angle(), q.c().angle(), q.d().angle()};
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double in_arc(Rng& rng, double from, double to, double margin) {
  double len = ccw_distance(from, to);
  return from + margin + uniform(rng, 0.0, len - 2.0 * margin);
}

/// Maps listed under "maps" in the config, or `count` random ones.
inline std::vector<PiecewiseMobiusHomeo> maps_from(const json& cfg, Rng& rng, std::size_t count,
                                                   std::size_t max_atoms) {
  std::vector<PiecewiseMobiusHomeo> maps;
  if (cfg.contains("maps") && cfg.at("maps").is_array()) {
    const auto& list = cfg.at("maps");
    for (std::size_t i = 0; i < list.size(); ++i) {
      try {
        maps.push_back(io::map_from_json(list[i]));
      } catch (const Error& e) {
        throw Error(e.code(), "map " + std::to_string(i) + ": " + e.what());
      }
    }
    return maps;
  }
  std::size_t n = get_or<std::size_t>(cfg, "maps", count);
  for (std::size_t i = 0; i < n; ++i) maps.push_back(random_map(rng, max_atoms));
  return maps;
}

}  // namespace detail

/// e^{-L} + e^{-L_perp} = 1 on random boxes, Liouville mass of the standard
/// box, symmetry of its Mobius images, and recovery of the scale t = 1.
inline Outcome ortho_identity(const json& cfg, const RunOptions& opt) {
  Outcome out;
  Rng rng(opt.seed);
  double tol = opt.tol.value_or(thresholds::ortho_residual);
  std::size_t n_boxes = detail::get_or<std::size_t>(cfg, "boxes", 10000);
  std::size_t max_atoms = detail::get_or<std::size_t>(cfg, "max_atoms", 8);
  bool box_rows = detail::get_or<bool>(cfg, "box_rows", false);
  auto t0 = std::chrono::steady_clock::now();
  auto maps = detail::maps_from(cfg, rng, 10, max_atoms);
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < n_boxes; ++i) boxes.push_back(random_box(rng));

  Table summary{"ortho_identity", {"map_id", "pieces", "boxes", "max_residual", "pass"}, {}};
  Table rows{"ortho_boxes", {"map_id", "box_id", "a", "b", "c", "d", "mass", "mass_perp", "residual"}, {}};
  for (std::size_t m = 0; m < maps.size(); ++m) {
    LiouvillePullback lf(maps[m]);
    double worst = 0.0;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      double l = lf.mass(boxes[b]), lp = lf.mass(ortho(boxes[b]));
      double r = std::abs(std::exp(-l) + std::exp(-lp) - 1.0);
      if (!(r <= worst)) worst = std::isnan(r) ? INFINITY : r;
      if (box_rows) {
        auto cells = detail::box_cells(boxes[b]);
        cells.insert(cells.begin(), {static_cast<long long>(m), static_cast<long long>(b)});
        cells.insert(cells.end(), {l, lp, r});
        rows.add(cells);
      }
    }
    bool ok = out.check(worst < tol);
    summary.add({static_cast<long long>(m), static_cast<long long>(maps[m].size()),
                 static_cast<long long>(boxes.size()), worst, std::string(ok ? "1" : "0")});
  }
  double elapsed = detail::seconds_since(t0);
  out.tables.push_back(summary);
  if (box_rows) out.tables.push_back(rows);

  // Standard box and its Mobius images.
  Table std_rows{"standard_box", {"sample", "mass", "abs_err", "pass"}, {}};
  Box q_std = Box::standard();
  double e0 = std::abs(liouville_mass(q_std) - std::log(2.0));
  std_rows.add({-1LL, liouville_mass(q_std), e0, std::string(out.check(e0 < thresholds::standard_box_mass) ? "1" : "0")});
  std::size_t n_images = detail::get_or<std::size_t>(cfg, "symmetric_samples", 1000);
  double worst_sym = 0.0;
  for (std::size_t i = 0; i < n_images; ++i) {
    Box img = image_box(random_mobius(rng, 4.0), q_std);
    double err = std::abs(liouville_mass(img) - std::log(2.0));
    worst_sym = std::max(worst_sym, err);
    std_rows.add({static_cast<long long>(i), liouville_mass(img), err,
                  std::string(is_symmetric(img, thresholds::symmetric_image) ? "1" : "0")});
  }
  out.check(worst_sym < thresholds::symmetric_image);
  out.tables.push_back(std_rows);

  // Scaling rigidity on the pair (Q_std, Q_std perp).
  Table rig{"rigidity", {"sample", "l1", "l1_perp", "l2", "l2_perp", "t", "abs_err", "pass"}, {}};
  std::size_t n_rig = detail::get_or<std::size_t>(cfg, "rigidity_samples", 100);
  for (std::size_t i = 0; i < n_rig; ++i) {
    auto f1 = random_map(rng, max_atoms);
    auto f2 = f1.post_composed(random_mobius(rng)).materialized();
    LiouvillePullback p1(f1), p2(f2);
    double l1 = p1.mass(q_std), l1p = p1.mass(ortho(q_std)), l2 = p2.mass(q_std), l2p = p2.mass(ortho(q_std));
    auto rec = recover_scale(l1, l1p, l2, l2p, thresholds::rigidity);
    double err = std::abs(rec.t - 1.0);
    bool ok = out.check(err < thresholds::rigidity && rec.consistent);
    rig.add({static_cast<long long>(i), l1, l1p, l2, l2p, rec.t, err, std::string(ok ? "1" : "0")});
  }
  out.tables.push_back(rig);
  out.timings.push_back("ortho_seconds=" + format_cell(elapsed));
  return out;
}

/// Normalized masses along earthquake rays, plus the moving-lamination variant.
inline Outcome quake_converge(const json& cfg, const RunOptions& opt) {
  Outcome out;
  Rng rng(opt.seed);
  double tol = opt.tol.value_or(thresholds::ray_error);
  auto ts = detail::doubles_or(cfg, "ts", {10, 20, 50, 100, 200});
  PiecewiseMobiusHomeo f = cfg.contains("map") ? io::map_from_json(cfg.at("map")) : PiecewiseMobiusHomeo();

  std::vector<std::pair<MeasuredLamination, std::vector<Box>>> instances;
  if (cfg.contains("lamination")) {
    auto lambda = io::lamination_from_json(cfg.at("lamination"));
    std::vector<Box> boxes;
    if (!cfg.contains("boxes")) throw Error(ErrorCode::InvalidInput, "\"lamination\" needs \"boxes\"");
    for (const auto& b : cfg.at("boxes")) boxes.push_back(io::box_from_json(b));
    instances.emplace_back(lambda, boxes);
  } else {
    const json r = cfg.value("random", json::object());
    std::size_t n_lam = detail::get_or<std::size_t>(r, "laminations", 20);
    std::size_t n_box = detail::get_or<std::size_t>(r, "boxes", 20);
    std::size_t max_atoms = detail::get_or<std::size_t>(r, "max_atoms", 8);
    double sep = detail::get_or<double>(r, "separation", 0.1);
    for (std::size_t i = 0; i < n_lam; ++i) {
      std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_atoms)(rng);
      instances.push_back(random_separated_instance(rng, k, n_box, sep));
    }
  }

  Table ray{"quake_converge", {"t", "box_id", "normalized_mass", "target_mass", "abs_err"}, {}};
  Table box_table{"quake_boxes", {"box_id", "a", "b", "c", "d", "mass"}, {}};
  Table lam_table{"quake_laminations", {"lamination_id", "tail", "head", "weight"}, {}};
  std::size_t base_id = 0;
  double worst_final = 0.0;
  std::size_t not_decreasing = 0;
  for (std::size_t li = 0; li < instances.size(); ++li) {
    const auto& [lambda, boxes] = instances[li];
    for (const auto& a : lambda.atoms())
      lam_table.add({static_cast<long long>(li), a.geodesic.tail().angle(), a.geodesic.head().angle(), a.weight});
    auto rows = earthquake_ray_masses(f, lambda, ts, boxes);
    std::vector<std::vector<double>> err(boxes.size());
    for (const auto& r : rows) {
      ray.add({r.t, static_cast<long long>(base_id + r.box_id), r.normalized_mass, r.target_mass, r.abs_err});
      err[r.box_id].push_back(r.abs_err);
    }
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      auto cells = detail::box_cells(boxes[b]);
      cells.insert(cells.begin(), static_cast<long long>(base_id + b));
      cells.push_back(lambda.mass(boxes[b]));
      box_table.add(cells);
      // Eventually decreasing: nonincreasing over the second half of the ts
      // (slack for errors already at rounding level).
      const auto& e = err[b];
      bool dec = true;
      for (std::size_t i = e.size() / 2; i + 1 < e.size(); ++i) dec = dec && e[i + 1] <= e[i] + 1e-12;
      bool ok = out.check(e.back() < tol && dec);
      if (!dec) ++not_decreasing;
      (void)ok;
      worst_final = std::max(worst_final, e.back());
    }
    base_id += boxes.size();
  }
  out.tables.push_back(ray);
  out.tables.push_back(box_table);
  out.tables.push_back(lam_table);
  out.notes.push_back("worst_final_error=" + format_cell(worst_final));
  out.notes.push_back("not_decreasing=" + std::to_string(not_decreasing));

  // alpha_n = phi_n(alpha), phi_n -> id, t_n = 10 n.
  if (cfg.value("sequence", true)) {
    const json s = cfg.value("sequence_config", json::object());
    std::size_t n_max = detail::get_or<std::size_t>(s, "n_max", 20);
    std::size_t atoms = detail::get_or<std::size_t>(s, "atoms", 4);
    std::size_t n_box = detail::get_or<std::size_t>(s, "boxes", 20);
    double sep = detail::get_or<double>(s, "separation", 0.1);
    double stride = detail::get_or<double>(s, "t_stride", 10.0);
    auto [alpha, boxes] = random_separated_instance(rng, atoms, n_box, sep);
    Table seq{"quake_sequence", {"n", "t", "box_id", "normalized_mass", "target_mass", "abs_err"}, {}};
    double final_worst = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      double eps = 1.0 / double(n);
      Mobius phi = Mobius::rotation(0.3 * eps) * Mobius::dilation(0.2 * eps) * Mobius::shear(0.1 * eps);
      MeasuredLamination alpha_n(pushforward(alpha.current(), phi));
      double t = stride * double(n);
      LiouvillePullback lt(earthquake(f, alpha_n, t));
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        double nm = lt.mass(boxes[b]) / t, target = alpha.mass(boxes[b]);
        double e = std::abs(nm - target);
        seq.add({static_cast<long long>(n), t, static_cast<long long>(b), nm, target, e});
        if (n == n_max) {
          out.check(e < thresholds::sequence_error);
          final_worst = std::max(final_worst, e);
        }
      }
    }
    out.tables.push_back(seq);
    out.notes.push_back("sequence_worst_error=" + format_cell(final_worst));
  }
  return out;
}

/// Finite-difference signs of the mass in the endpoints of the fault.
inline Outcome quake_monotone(const json& cfg, const RunOptions& opt) {
  Outcome out;
  Rng rng(opt.seed);
  double same_tol = opt.tol.value_or(thresholds::monotone_same);
  std::size_t samples = detail::get_or<std::size_t>(cfg, "samples", 1000);
  auto ts = detail::doubles_or(cfg, "ts", {0.5, 2.0});
  double h = detail::get_or<double>(cfg, "h", thresholds::monotone_step);
  PiecewiseMobiusHomeo f = cfg.contains("map") ? io::map_from_json(cfg.at("map")) : PiecewiseMobiusHomeo();
  double margin = std::max(0.01, 10.0 * h);

  Table tab{"quake_monotone",
            {"sample", "case", "t", "a", "b", "c", "d", "tail", "head", "base_mass", "d_tail", "d_head", "pass"},
            {}};
  for (std::size_t s = 0; s < samples; ++s) {
    Box q = random_box(rng, 4.0 * margin);
    const auto& c = q.corners();
    int kind = static_cast<int>(s % 3);
    std::size_t cx, cy;
    if (kind == 0) {
      cx = cy = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    } else if (kind == 1) {
      cx = 0, cy = 2;
    } else {
      cx = 1, cy = 3;
    }
    double x = 0.0, y = 0.0;
    do {
      x = detail::in_arc(rng, c[cx].angle(), c[(cx + 1) % 4].angle(), margin);
      y = detail::in_arc(rng, c[cy].angle(), c[(cy + 1) % 4].angle(), margin);
    } while (circular_distance(x, y) < margin);
    Geodesic g = std::bernoulli_distribution(0.5)(rng) ? Geodesic(BoundaryPoint(y), BoundaryPoint(x))
                                                        : Geodesic(BoundaryPoint(x), BoundaryPoint(y));
    double t = ts[s / 3 % ts.size()];
    auto rep = monotonicity_probe(f, q, g, t, h);
    bool ok = out.check(rep.expected_signs(same_tol));
    auto cells = detail::box_cells(q);
    cells.insert(cells.begin(), {static_cast<long long>(s), std::string(to_string(rep.config)), t});
    cells.insert(cells.end(), {g.tail().angle(), g.head().angle(), rep.base_mass, rep.d_tail, rep.d_head,
                               std::string(ok ? "1" : "0")});
    tab.add(cells);
  }
  out.tables.push_back(tab);
  return out;
}

/// Q = [0, beta] x [inf, -1] in the half-plane, fault along the diagonal.
inline Outcome quake_bounds(const json& cfg, const RunOptions& opt) {
  Outcome out;
  double tol = opt.tol.value_or(thresholds::diagonal_closed_form);
  auto ts = detail::doubles_or(cfg, "ts", {0.1, 1.0, std::log(2.0), 5.0, 20.0});
  auto betas = detail::doubles_or(cfg, "betas", {0.5, 1.0, 3.0});
  Table tab{"quake_bounds", {"t", "beta", "lower", "value", "upper", "closed_form", "abs_err", "pass"}, {}};
  for (double t : ts) {
    for (double beta : betas) {
      if (!(beta > 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be positive");
      Box q(BoundaryPoint::from_halfplane(0.0), BoundaryPoint::from_halfplane(beta),
            BoundaryPoint::from_halfplane(INFINITY), BoundaryPoint::from_halfplane(-1.0));
      auto r = diagonal_bounds_check(PiecewiseMobiusHomeo(), q, t);
      double cf = std::log(std::exp(t) * beta + 1.0);
      double err = std::abs(r.value - cf);
      bool ok = out.check(err < tol && r.strict());
      tab.add({t, beta, r.lower, r.value, r.upper, cf, err, std::string(ok ? "1" : "0")});
    }
  }
  out.tables.push_back(tab);
  return out;
}

/// Unit atoms shrinking to a point: weak seminorm -> 0, uniform stays at 1.
inline Outcome weakstar_demo(const json& cfg, const RunOptions& opt) {
  Outcome out;
  double floor = opt.tol.value_or(thresholds::uniform_floor);
  std::size_t n_max = detail::get_or<std::size_t>(cfg, "n_max", 20);
  double center = detail::get_or<double>(cfg, "center", 0.75 * std::numbers::pi + 0.1);
  double gap_scale = detail::get_or<double>(cfg, "gap_scale", 3.0);
  StepFunction xi = cfg.contains("step") ? io::step_from_json(cfg.at("step")) : StepFunction::indicator(Box::standard());
  Table tab{"weakstar_demo", {"n", "tail", "head", "weak", "uniform", "pass"}, {}};
  for (std::size_t n = 1; n <= n_max; ++n) {
    double gap = gap_scale / double(n);
    Geodesic g(BoundaryPoint(center - 0.5 * gap), BoundaryPoint(center + 0.5 * gap));
    AtomicCurrent alpha({Atom{g, 1.0}});
    double weak = weak_seminorm(alpha, xi);
    double uni = uniform_seminorm_estimate(alpha, xi, opt.sampler);
    bool ok = uni >= floor;
    if (n >= static_cast<std::size_t>(thresholds::weak_vanish_from)) ok = ok && weak < thresholds::weak_vanish;
    out.check(ok);
    tab.add({static_cast<long long>(n), g.tail().angle(), g.head().angle(), weak, uni, std::string(ok ? "1" : "0")});
  }
  out.tables.push_back(tab);
  return out;
}

/// Lower bounds for the quasisymmetric constant, at the configured sampler and one level finer.
inline Outcome qs_estimate(const json& cfg, const RunOptions& opt) {
  Outcome out;
  Rng rng(opt.seed);
  std::size_t mobius_count = detail::get_or<std::size_t>(cfg, "mobius_maps", 3);
  std::size_t max_atoms = detail::get_or<std::size_t>(cfg, "max_atoms", 4);
  int levels = detail::get_or<int>(cfg, "levels", 2);
  struct Entry {
    std::string kind;
    PiecewiseMobiusHomeo map;
  };
  std::vector<Entry> maps;
  for (std::size_t i = 0; i < mobius_count; ++i) maps.push_back({"mobius", PiecewiseMobiusHomeo(random_mobius(rng))});
  for (auto& m : detail::maps_from(cfg, rng, 10, max_atoms)) maps.push_back({"piecewise", std::move(m)});

  Table tab{"qs_estimate", {"map_id", "kind", "pieces", "level", "estimate", "evaluations", "pass"}, {}};
  for (std::size_t i = 0; i < maps.size(); ++i) {
    SamplerConfig s = opt.sampler;
    double prev = -INFINITY;
    for (int level = 1; level <= levels; ++level, s = s.enlarged()) {
      auto est = qs_constant_search(maps[i].map, s);
      bool ok = est.value >= 1.0 - thresholds::qs_lower_slack && est.value >= prev;
      if (maps[i].kind == "mobius") ok = ok && est.value <= 1.0 + opt.tol.value_or(thresholds::qs_upper_slack);
      out.check(ok);
      prev = est.value;
      tab.add({static_cast<long long>(i), maps[i].kind, static_cast<long long>(maps[i].map.size()),
               static_cast<long long>(level), est.value, static_cast<long long>(est.evaluations),
               std::string(ok ? "1" : "0")});
    }
  }
  out.tables.push_back(tab);
  return out;
}

/// Weak and uniform seminorms of a current against a step function.
inline Outcome seminorm(const json& cfg, const RunOptions& opt) {
  Outcome out;
  if (!cfg.contains("step")) throw Error(ErrorCode::InvalidInput, "seminorm needs \"step\"");
  StepFunction xi = io::step_from_json(cfg.at("step"));
  Table tab{"seminorm", {"item", "kind", "weak", "uniform", "evaluations", "pass"}, {}};
  auto record = [&](long long id, const std::string& kind, const auto& alpha) {
    double weak = weak_seminorm(alpha, xi);
    auto est = uniform_seminorm_search(alpha, xi, opt.sampler);
    bool ok = out.check(est.value >= weak - opt.tol.value_or(1e-12));
    tab.add({id, kind, weak, est.value, static_cast<long long>(est.evaluations), std::string(ok ? "1" : "0")});
  };
  long long id = 0;
  if (cfg.contains("currents"))
    for (const auto& c : cfg.at("currents")) record(id++, "atomic", io::current_from_json(c));
  if (cfg.contains("maps"))
    for (const auto& m : cfg.at("maps")) record(id++, "liouville", LiouvillePullback(io::map_from_json(m)));
  if (id == 0) throw Error(ErrorCode::InvalidInput, "seminorm needs \"currents\" or \"maps\"");
  out.tables.push_back(tab);
  return out;
}

/// Both orders of two elementary earthquakes along disjoint atoms give the same class.
inline Outcome commute_check(const json& cfg, const RunOptions& opt) {
  Outcome out;
  Rng rng(opt.seed);
  double tol = opt.tol.value_or(thresholds::commute);
  std::size_t pairs = detail::get_or<std::size_t>(cfg, "pairs", 100);
  double t = detail::get_or<double>(cfg, "t", 1.0);
  Table tab{"commute_check",
            {"pair", "tail1", "head1", "tail2", "head2", "order_deviation", "simultaneous_deviation", "pass"},
            {}};
  for (std::size_t i = 0; i < pairs; ++i) {
    auto lambda = random_lamination(rng, 2, 0.05, 1.0, 1.0);
    const auto& a = lambda.atoms();
    PiecewiseMobiusHomeo id;
    auto fg = earthquake_sequential(id, {a[0], a[1]}, t);
    auto gf = earthquake_sequential(id, {a[1], a[0]}, t);
    auto both = earthquake(id, lambda, t);
    double d_order = class_deviation(fg, gf);
    double d_sim = class_deviation(fg, both);
    bool ok = out.check(d_order < tol && d_sim < tol);
    tab.add({static_cast<long long>(i), a[0].geodesic.tail().angle(), a[0].geodesic.head().angle(),
             a[1].geodesic.tail().angle(), a[1].geodesic.head().angle(), d_order, d_sim, std::string(ok ? "1" : "0")});
  }
  out.tables.push_back(tab);
  return out;
}

using Experiment = std::function<Outcome(const json&, const RunOptions&)>;

inline const std::map<std::string, Experiment>& experiments() {
  static const std::map<std::string, Experiment> table{
      {"ortho-identity", ortho_identity}, {"quake-converge", quake_converge}, {"quake-monotone", quake_monotone},
      {"quake-bounds", quake_bounds},     {"weakstar-demo", weakstar_demo},   {"qs-estimate", qs_estimate},
      {"seminorm", seminorm},             {"commute-check", commute_check}};
  return table;
}

/// Options from the config document; CLI values (when given) win.
inline RunOptions options_from(const json& cfg, std::optional<std::uint64_t> seed, std::optional<double> tol) {
  RunOptions opt;
  opt.seed = seed.value_or(detail::get_or<std::uint64_t>(cfg, "seed", 1));
  if (tol) {
    opt.tol = tol;
  } else if (cfg.contains("tol")) {
    opt.tol = io::detail::number(cfg.at("tol"), "tol");
  }
  opt.sampler = io::sampler_from_json(cfg.value("sampler", json()));
  if (!cfg.contains("sampler") || !cfg.at("sampler").contains("seed")) opt.sampler.seed = opt.seed;
  return opt;
}

}  // namespace teich::lab
