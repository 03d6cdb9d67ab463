// SPDX-License-Identifier: Apache-2.0
// nav.hpp
// Demo reactive policy: widest-gap following on the LIDAR scan with a
// steering bias away from painted lines seen by the camera.
#pragma once

#include "igvsim/measurements.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace igvsim {

struct NavParams {
  double v_nom{0.8};                 // m/s
  double d_safe{1.2};                // m
  double d_stop{0.5};                // m
  double k_heading{1.5};             // 1/s
  double w_cap{60.0};                // deg/s
  int line_white_threshold{200};     // per channel
  double line_bias_gain{30.0};       // deg/s per unit asymmetry
  double front_half_angle{15.0};     // deg
  double lidar_fov{240.0};           // deg, must match the scanner

  bool valid() const {
    return d_stop < d_safe && v_nom > 0.0 && d_stop >= 0.0 && k_heading > 0.0 && w_cap > 0.0 &&
           line_bias_gain > 0.0 && lidar_fov > 0.0 && lidar_fov <= 360.0;
  }
};

/// Diagnostics that ride along with a command.
struct NavDecision {
  MotorCommand command;
  double min_front_range{std::numeric_limits<double>::infinity()};
  double gap_center_deg{0.0};
  double line_bias{0.0};
};

inline double nav_beam_angle_deg(const NavParams& p, std::size_t i, std::size_t n) {
  if (n < 2) return 0.0;
  return -0.5 * p.lidar_fov + static_cast<double>(i) * p.lidar_fov / static_cast<double>(n - 1);
}

/// White-pixel counts in the left and right halves of the bottom third.
struct LineCounts {
  std::uint64_t left{0};
  std::uint64_t right{0};
};

inline LineCounts count_line_pixels(const CameraFrame& frame, int threshold) {
  LineCounts c;
  const int row0 = frame.height - frame.height / 3;
  const int half = frame.width / 2;
  const int right0 = (frame.width + 1) / 2;
  for (int row = row0; row < frame.height; ++row) {
    for (int col = 0; col < frame.width; ++col) {
      const Rgb8 px = frame.at(col, row);
      if (px.r <= threshold || px.g <= threshold || px.b <= threshold) continue;
      if (col < half) ++c.left;
      else if (col >= right0) ++c.right;
    }
  }
  return c;
}

inline NavDecision navigate_decide(const LidarScan& scan, const CameraFrame* frame, const GpsFix* /*fix*/,
                                   const NavParams& p) {
  NavDecision d;
  const std::size_t n = scan.ranges.size();
  if (n == 0) return d;

  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(nav_beam_angle_deg(p, i, n)) <= p.front_half_angle) {
      d.min_front_range = std::min(d.min_front_range, scan.ranges[i]);
    }
  }

  // Widest run of free beams; ties go to the centre nearer zero, then the
  // more clockwise one.
  bool have_gap = false;
  std::size_t best_len = 0;
  double best_center = 0.0;
  for (std::size_t i = 0; i < n;) {
    if (!(scan.ranges[i] > p.d_safe)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && scan.ranges[j + 1] > p.d_safe) ++j;
    const std::size_t len = j - i + 1;
    const double center = 0.5 * (nav_beam_angle_deg(p, i, n) + nav_beam_angle_deg(p, j, n));
    const bool better = !have_gap || len > best_len ||
                        (len == best_len && (std::abs(center) < std::abs(best_center) ||
                                             (std::abs(center) == std::abs(best_center) && center < best_center)));
    if (better) {
      have_gap = true;
      best_len = len;
      best_center = center;
    }
    i = j + 1;
  }

  if (!have_gap) {
    std::size_t longest = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (scan.ranges[i] > scan.ranges[longest]) longest = i;
    }
    const double angle = nav_beam_angle_deg(p, longest, n);
    d.command = {0.0, angle < 0.0 ? -p.w_cap : p.w_cap};
    d.gap_center_deg = angle;
    return d;
  }

  d.gap_center_deg = best_center;
  double angular = std::clamp(p.k_heading * best_center, -p.w_cap, p.w_cap);
  const double front = std::isfinite(d.min_front_range) ? d.min_front_range : std::numeric_limits<double>::max();
  const double linear = p.v_nom * std::clamp((front - p.d_stop) / (p.d_safe - p.d_stop), 0.0, 1.0);

  if (frame != nullptr && frame->width > 0 && frame->height > 0) {
    const LineCounts c = count_line_pixels(*frame, p.line_white_threshold);
    const double l = static_cast<double>(c.left);
    const double r = static_cast<double>(c.right);
    d.line_bias = -p.line_bias_gain * (l - r) / (l + r + 1.0);
    angular = std::clamp(angular + d.line_bias, -p.w_cap, p.w_cap);
  }
  d.command = {linear, angular};
  return d;
}

/// Pure mapping from the latest sensor values to a motor command.
inline MotorCommand navigate_step(const LidarScan& scan, const CameraFrame* frame, const GpsFix* fix,
                                  const NavParams& params) {
  return navigate_decide(scan, frame, fix, params).command;
}

inline NavParams nav_params_from_json(const nlohmann::json& j) {
  NavParams p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "v_nom") p.v_nom = it->get<double>();
    else if (k == "d_safe") p.d_safe = it->get<double>();
    else if (k == "d_stop") p.d_stop = it->get<double>();
    else if (k == "k_heading") p.k_heading = it->get<double>();
    else if (k == "w_cap") p.w_cap = it->get<double>();
    else if (k == "line_white_threshold") p.line_white_threshold = it->get<int>();
    else if (k == "line_bias_gain") p.line_bias_gain = it->get<double>();
    else if (k == "front_half_angle") p.front_half_angle = it->get<double>();
    else if (k == "lidar_fov") p.lidar_fov = it->get<double>();
    else throw std::invalid_argument("unknown navigation parameter \"" + k + "\"");
  }
  if (!p.valid()) throw std::invalid_argument("navigation parameters violate d_stop < d_safe or positivity");
  return p;
}

}  // namespace igvsim
