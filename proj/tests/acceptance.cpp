// One line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <string>

#include "teich/lab/experiments.hpp"

using namespace teich;
using namespace teich::lab;
using nlohmann::json;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s %s %s\n", id, ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

const Table& table(const Outcome& o, const std::string& name) {
  for (const auto& t : o.tables)
    if (t.name == name) return t;
  throw Error(ErrorCode::InvalidInput, "missing table " + name);
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  throw Error(ErrorCode::InvalidInput, "missing column " + name);
}

double num(const Cell& c) { return std::holds_alternative<double>(c) ? std::get<double>(c) : double(std::get<long long>(c)); }

double column_max(const Table& t, const std::string& name) {
  std::size_t k = column(t, name);
  double m = 0.0;
  for (const auto& r : t.rows) m = std::max(m, num(r[k]));
  return m;
}

std::size_t count_failed_rows(const Table& t) {
  std::size_t k = column(t, "pass"), n = 0;
  for (const auto& r : t.rows) n += std::get<std::string>(r[k]) != "1";
  return n;
}

template <class F>
std::pair<Outcome, double> timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o = f();
  return {std::move(o), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

RunOptions options(const json& cfg) { return options_from(cfg, std::nullopt, std::nullopt); }

}  // namespace

int main() {
  try {
    {
      json cfg = {{"boxes", 10000}, {"maps", 10}, {"max_atoms", 8}, {"symmetric_samples", 0}, {"rigidity_samples", 0}};
      auto [o, secs] = timed([&] { return ortho_identity(cfg, options(cfg)); });
      const auto& t = table(o, "ortho_identity");
      double worst = column_max(t, "max_residual"), pieces = column_max(t, "pieces");
      bool ok = t.rows.size() == 10 && worst < thresholds::ortho_residual && pieces <= 16 &&
                secs < thresholds::ortho_runtime;
      report(1, "ortho-identity", ok, fmt("max_residual=%.3g max_pieces=%.0f seconds=%.2f", worst, pieces, secs));
    }
    {
      json cfg = {{"boxes", 0}, {"maps", 0}, {"symmetric_samples", 1000}, {"rigidity_samples", 0}};
      auto o = ortho_identity(cfg, options(cfg));
      const auto& t = table(o, "standard_box");
      double base = std::abs(liouville_mass(Box::standard()) - std::log(2.0));
      bool ok = t.rows.size() == 1001 && base < thresholds::standard_box_mass && count_failed_rows(t) == 0;
      report(2, "standard-box", ok, fmt("mass_err=%.3g symmetric_max_err=%.3g", base, column_max(t, "abs_err")));
    }
    {
      json cfg = json::object();
      auto o = quake_bounds(cfg, options(cfg));
      const auto& t = table(o, "quake_bounds");
      bool ok = t.rows.size() == 15 && count_failed_rows(t) == 0;
      report(3, "diagonal-closed-form", ok, fmt("max_abs_err=%.3g rows=%.0f", column_max(t, "abs_err"), double(t.rows.size())));
    }
    {
      json cfg = {{"samples", 1000}, {"ts", {0.5, 2.0}}, {"h", 1e-4}};
      auto [o, secs] = timed([&] { return quake_monotone(cfg, options(cfg)); });
      const auto& t = table(o, "quake_monotone");
      bool ok = t.rows.size() == 1000 && count_failed_rows(t) == 0 && secs < thresholds::monotone_runtime;
      report(4, "monotonicity", ok,
             fmt("failed=%.0f seconds=%.2f", double(count_failed_rows(t)), secs));
    }
    {
      json cfg = {{"ts", {10, 20, 50, 100, 200}},
                  {"random", {{"laminations", 20}, {"boxes", 20}, {"max_atoms", 8}}},
                  {"sequence", false}};
      auto [o, secs] = timed([&] { return quake_converge(cfg, options(cfg)); });
      const auto& t = table(o, "quake_converge");
      std::size_t k_t = column(t, "t"), k_e = column(t, "abs_err");
      double worst = 0.0;
      std::size_t over = 0, finals = 0;
      for (const auto& r : t.rows)
        if (num(r[k_t]) == thresholds::ray_final_t) {
          ++finals;
          worst = std::max(worst, num(r[k_e]));
          over += !(num(r[k_e]) < thresholds::ray_error);
        }
      bool ok = finals == 400 && o.ok() && secs < thresholds::ray_runtime;
      report(5, "earthquake-ray", ok,
             fmt("worst_error_at_t200=%.4g boxes_over=%.0f seconds=%.1f", worst, double(over), secs) + " " +
                 o.notes[1]);
    }
    {
      json cfg = {{"pairs", 100}, {"t", 1.0}};
      auto o = commute_check(cfg, options(cfg));
      const auto& t = table(o, "commute_check");
      bool ok = t.rows.size() == 100 && o.ok();
      report(6, "commutation", ok,
             fmt("max_order_dev=%.3g max_simultaneous_dev=%.3g", column_max(t, "order_deviation"),
                 column_max(t, "simultaneous_deviation")));
    }
    {
      json cfg = {{"n_max", 20}};
      auto o = weakstar_demo(cfg, options(cfg));
      const auto& t = table(o, "weakstar_demo");
      std::size_t k_w = column(t, "weak"), k_u = column(t, "uniform");
      double min_uniform = 1e300, max_weak_late = 0.0;
      for (const auto& r : t.rows) {
        min_uniform = std::min(min_uniform, num(r[k_u]));
        if (num(r[0]) >= thresholds::weak_vanish_from) max_weak_late = std::max(max_weak_late, num(r[k_w]));
      }
      bool ok = t.rows.size() == 20 && o.ok();
      report(7, "weakstar-vs-uniform", ok, fmt("max_weak_n>=5=%.3g min_uniform=%.6g", max_weak_late, min_uniform));
    }
    {
      json cfg = {{"boxes", 0}, {"maps", 0}, {"symmetric_samples", 0}, {"rigidity_samples", 100}};
      auto o = ortho_identity(cfg, options(cfg));
      const auto& t = table(o, "rigidity");
      bool ok = t.rows.size() == 100 && count_failed_rows(t) == 0;
      report(8, "scaling-rigidity", ok, fmt("max_abs_err=%.3g", column_max(t, "abs_err")));
    }
    {
      json cfg = {{"mobius_maps", 3}, {"maps", 10}, {"levels", 2}};
      auto o = qs_estimate(cfg, options(cfg));
      const auto& t = table(o, "qs_estimate");
      std::size_t k_kind = column(t, "kind"), k_e = column(t, "estimate");
      double mob_lo = 1e300, mob_hi = 0.0, all_lo = 1e300;
      for (const auto& r : t.rows) {
        double e = num(r[k_e]);
        all_lo = std::min(all_lo, e);
        if (std::get<std::string>(r[k_kind]) == "mobius") mob_lo = std::min(mob_lo, e), mob_hi = std::max(mob_hi, e);
      }
      bool ok = t.rows.size() == 26 && o.ok() && mob_lo >= 1.0 - thresholds::qs_lower_slack &&
                mob_hi <= 1.0 + thresholds::qs_upper_slack;
      report(9, "qs-constant", ok, fmt("mobius_range=[%.12g, %.12g] min_estimate=%.12g", mob_lo, mob_hi, all_lo));
    }
    {
      json cfg = {{"random", {{"laminations", 0}}},
                  {"sequence", true},
                  {"sequence_config", {{"n_max", 20}, {"atoms", 4}, {"boxes", 20}, {"t_stride", 10.0}}}};
      auto o = quake_converge(cfg, options(cfg));
      const auto& t = table(o, "quake_sequence");
      bool ok = t.rows.size() == 400 && o.ok();
      report(10, "sequence-convergence", ok, o.notes.back());
    }
  } catch (const std::exception& e) {
    std::printf("acceptance: aborted: %s\n", e.what());
    return 1;
  }
  std::printf("acceptance: %d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
