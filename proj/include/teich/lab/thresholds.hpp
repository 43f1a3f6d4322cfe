#pragma once

// Pass/fail thresholds shared by the lab experiments and the acceptance suite.

namespace teich::lab::thresholds {

inline constexpr double ortho_residual = 1e-8;
inline constexpr double standard_box_mass = 1e-12;
inline constexpr double symmetric_image = 1e-9;
inline constexpr double diagonal_closed_form = 1e-9;
inline constexpr double monotone_same = 1e-10;
inline constexpr double monotone_step = 1e-4;
inline constexpr double ray_error = 0.02;
inline constexpr double ray_final_t = 200.0;
inline constexpr double commute = 1e-8;
inline constexpr double weak_vanish = 1e-12;
inline constexpr int weak_vanish_from = 5;
inline constexpr double uniform_floor = 0.999;
inline constexpr double rigidity = 1e-9;
inline constexpr double qs_lower_slack = 1e-9;
inline constexpr double qs_upper_slack = 1e-6;
inline constexpr double sequence_error = 0.05;

// Wall-clock limits in seconds.
inline constexpr double ortho_runtime = 5.0;
inline constexpr double monotone_runtime = 10.0;
inline constexpr double ray_runtime = 60.0;

}  // namespace teich::lab::thresholds
