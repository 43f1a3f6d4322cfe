#pragma once

// Lower-bound estimation of suprema over the Mobius group.
//
// Samples are laid out on product grids over three-parameter families of
// Mobius maps, the default family being the Iwasawa-style
//   psi(theta, a, n) = rotation(theta) * dilation(a) * shear(n).
// Each grid is followed by rounds of coordinate-wise golden-section search
// around its incumbent. The reported value is the maximum over every
// evaluated sample, so it is always a lower bound for the true supremum.
//
// `levels` nests grids: level l doubles the resolution of level l-1 and
// contains all of its points, and the estimate is taken over the union of all
// levels together with their refinements. Raising `levels` therefore only
// adds samples and can never lower the estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "teich/error.hpp"
#include "teich/mobius.hpp"

namespace teich {

struct SamplerConfig {
  int rotations = 64;
  double dilation_range = 8.0;
  int dilation_steps = 33;
  double shear_range = 8.0;
  int shear_steps = 33;
  int refine_rounds = 3;
  std::uint64_t seed = 0;
  int levels = 1;
  int random_samples = 0;
  std::size_t max_evaluations = 50'000'000;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// The next nested configuration: one more grid level.
  SamplerConfig enlarged() const {
    SamplerConfig c = *this;
    c.levels += 1;
    return c;
  }
};

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
  bool periodic = false;

  double spacing() const {
    if (periodic) return (hi - lo) / steps;
    return steps > 1 ? (hi - lo) / (steps - 1) : (hi - lo);
  }

  double at(int i) const {
    if (steps <= 1 && !periodic) return 0.5 * (lo + hi);
    return lo + spacing() * i;
  }

  /// Grid of the next level: every old point is kept.
  GridAxis refined() const {
    GridAxis a = *this;
    a.steps = periodic ? steps * 2 : (steps > 1 ? (steps - 1) * 2 + 1 : 1);
    return a;
  }
};

/// A three-parameter family of Mobius maps together with its sampling box.
struct MobiusFamily {
  std::function<Mobius(double, double, double)> make;
  std::array<GridAxis, 3> axes;
};

inline MobiusFamily iwasawa_family(const SamplerConfig& c) {
  MobiusFamily f;
  f.make = [](double theta, double a, double n) {
    return Mobius::rotation(theta) * Mobius::dilation(a) * Mobius::shear(n);
  };
  f.axes = {GridAxis{0.0, kTwoPi, c.rotations, true},
            GridAxis{-c.dilation_range, c.dilation_range, c.dilation_steps, false},
            GridAxis{-c.shear_range, c.shear_range, c.shear_steps, false}};
  return f;
}

struct SupremumEstimate {
  double value = -std::numeric_limits<double>::infinity();
  Mobius argmax;
  std::size_t evaluations = 0;
};

namespace detail {

using Params = std::array<double, 3>;

/// Evaluate objective(make(p)) for every p; the values come back in input order.
template <class Objective>
std::vector<double> parallel_map(const MobiusFamily& fam, const std::vector<Params>& pts, const Objective& objective,
                                 unsigned threads) {
  std::vector<double> out(pts.size());
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, pts.size() / 256)));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = objective(fam.make(pts[i][0], pts[i][1], pts[i][2]));
  };
  if (n <= 1) {
    work(0, pts.size());
    return out;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (pts.size() + n - 1) / n;
  for (unsigned t = 0; t < n; ++t) {
    std::size_t b = t * chunk, e = std::min(pts.size(), b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace detail

/// Estimates sup of `objective` over the union of the given families.
class SupremumSearch {
 public:
  explicit SupremumSearch(SamplerConfig config) : config_(config) {}

  template <class Objective>
  SupremumEstimate maximize(const Objective& objective, const std::vector<MobiusFamily>& families) const {
    SupremumEstimate best;
    best.value = -std::numeric_limits<double>::infinity();
    for (const auto& fam : families) {
      auto axes = fam.axes;
      for (int level = 0; level < std::max(1, config_.levels); ++level) {
        if (level > 0)
          for (auto& ax : axes) ax = ax.refined();
        run_grid(objective, fam, axes, best);
      }
      if (config_.random_samples > 0) run_random(objective, fam, best);
    }
    return best;
  }

  const SamplerConfig& config() const { return config_; }

 private:
  using Params = detail::Params;

  void charge(SupremumEstimate& best, std::size_t n) const {
    best.evaluations += n;
    if (best.evaluations > config_.max_evaluations)
      throw Error(ErrorCode::SamplerBudgetExceeded, "sampler evaluation budget exceeded");
  }

  // Ties keep the earliest sample, which makes the incumbent independent of thread scheduling.
  static bool absorb(const MobiusFamily& fam, const std::vector<Params>& pts, const std::vector<double>& vals,
                     SupremumEstimate& best, Params& incumbent, double& incumbent_value) {
    bool improved = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (vals[i] > incumbent_value) {
        incumbent_value = vals[i];
        incumbent = pts[i];
        improved = true;
      }
    }
    if (incumbent_value > best.value) {
      best.value = incumbent_value;
      best.argmax = fam.make(incumbent[0], incumbent[1], incumbent[2]);
    }
    return improved;
  }

  template <class Objective>
  void run_grid(const Objective& objective, const MobiusFamily& fam, const std::array<GridAxis, 3>& axes,
                SupremumEstimate& best) const {
    std::vector<Params> pts;
    pts.reserve(static_cast<std::size_t>(axes[0].steps) * axes[1].steps * axes[2].steps);
    for (int i = 0; i < axes[0].steps; ++i)
      for (int j = 0; j < axes[1].steps; ++j)
        for (int k = 0; k < axes[2].steps; ++k) pts.push_back({axes[0].at(i), axes[1].at(j), axes[2].at(k)});
    charge(best, pts.size());
    auto vals = detail::parallel_map(fam, pts, objective, config_.threads);
    Params incumbent = pts.front();
    double incumbent_value = -std::numeric_limits<double>::infinity();
    absorb(fam, pts, vals, best, incumbent, incumbent_value);
    refine(objective, fam, axes, incumbent, incumbent_value, best);
  }

  template <class Objective>
  void run_random(const Objective& objective, const MobiusFamily& fam, SupremumEstimate& best) const {
    std::mt19937_64 rng(config_.seed);
    std::vector<Params> pts(static_cast<std::size_t>(config_.random_samples));
    for (auto& p : pts)
      for (std::size_t k = 0; k < 3; ++k) {
        std::uniform_real_distribution<double> u(fam.axes[k].lo, fam.axes[k].hi);
        p[k] = u(rng);
      }
    charge(best, pts.size());
    auto vals = detail::parallel_map(fam, pts, objective, config_.threads);
    Params incumbent = pts.front();
    double incumbent_value = -std::numeric_limits<double>::infinity();
    absorb(fam, pts, vals, best, incumbent, incumbent_value);
  }

  // Coordinate-wise golden-section search; the bracket starts at one grid
  // spacing around the incumbent and halves every round.
  template <class Objective>
  void refine(const Objective& objective, const MobiusFamily& fam, const std::array<GridAxis, 3>& axes,
              Params incumbent, double incumbent_value, SupremumEstimate& best) const {
    constexpr double kInvPhi = 0.6180339887498949;
    constexpr int kIterations = 20;
    auto eval = [&](const Params& p) {
      charge(best, 1);
      return objective(fam.make(p[0], p[1], p[2]));
    };
    auto consider = [&](const Params& p, double v) {
      if (v > incumbent_value) {
        incumbent_value = v;
        incumbent = p;
        if (v > best.value) {
          best.value = v;
          best.argmax = fam.make(p[0], p[1], p[2]);
        }
      }
    };
    double scale = 1.0;
    for (int round = 0; round < config_.refine_rounds; ++round, scale *= 0.5) {
      for (std::size_t k = 0; k < 3; ++k) {
        double h = axes[k].spacing() * scale;
        if (!(h > 0.0)) continue;
        double lo = incumbent[k] - h, hi = incumbent[k] + h;
        if (!axes[k].periodic) {
          lo = std::max(lo, axes[k].lo);
          hi = std::min(hi, axes[k].hi);
        }
        Params p = incumbent;
        double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
        p[k] = x1;
        double f1 = eval(p);
        consider(p, f1);
        p[k] = x2;
        double f2 = eval(p);
        consider(p, f2);
        for (int it = 0; it < kIterations; ++it) {
          if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            p[k] = x1;
            f1 = eval(p);
            consider(p, f1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            p[k] = x2;
            f2 = eval(p);
            consider(p, f2);
          }
        }
      }
    }
  }

  SamplerConfig config_;
};

/// Convenience: sup over the default Iwasawa grid.
template <class Objective>
SupremumEstimate estimate_supremum(const Objective& objective, const SamplerConfig& config) {
  return SupremumSearch(config).maximize(objective, {iwasawa_family(config)});
}

}  // namespace teich
