// SPDX-License-Identifier: Apache-2.0
// dynamics.hpp
// Motion model: acceleration-limited tracking of the commanded speeds, exact
// unicycle arcs, and resolve-and-slide contact against the course obstacles.
#pragma once

#include "igvsim/geometry.hpp"
#include "igvsim/measurements.hpp"
#include "igvsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace igvsim {

struct DriveParams {
  double v_max{1.0};        // m/s
  double w_max{90.0};       // deg/s
  double a_max{2.0};        // m/s^2
  double alpha_max{180.0};  // deg/s^2
  double footprint_radius{0.5};

  bool valid() const {
    return v_max > 0.0 && w_max > 0.0 && a_max > 0.0 && alpha_max > 0.0 && footprint_radius > 0.0;
  }
};

struct RobotState {
  Pose2 pose;
  double v{0.0};  // m/s
  double w{0.0};  // rad/s
  MotorCommand commanded;
  bool collided{false};
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct Velocities {
  double v{0.0};  // m/s
  double w{0.0};  // rad/s
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline double move_toward(double current, double target, double max_delta) {
  if (std::abs(target - current) <= max_delta) return target;
  return current + (target > current ? max_delta : -max_delta);
}

/// One rate-limited step of the velocity controller toward `cmd`.
inline Velocities apply_motor_response(const RobotState& state, const MotorCommand& cmd, const DriveParams& params,
                                       double dt) {
  const double w_max = deg_to_rad(params.w_max);
  const double target_v = std::clamp(cmd.linear, -params.v_max, params.v_max);
  const double target_w = std::clamp(deg_to_rad(cmd.angular), -w_max, w_max);
  return {move_toward(state.v, target_v, params.a_max * dt),
          move_toward(state.w, target_w, deg_to_rad(params.alpha_max) * dt)};
}

/// Exact constant-(v, w) arc over dt.
inline Pose2 integrate_unicycle(const Pose2& pose, double v, double w, double dt) {
  Pose2 out;
  if (std::abs(w) > 1e-6) {
    const double th1 = pose.heading + w * dt;
    const double r = v / w;
    out.x = pose.x + r * (std::sin(th1) - std::sin(pose.heading));
    out.y = pose.y - r * (std::cos(th1) - std::cos(pose.heading));
    out.heading = wrap_angle(th1);
  } else {
    out.x = pose.x + v * dt * std::cos(pose.heading);
    out.y = pose.y + v * dt * std::sin(pose.heading);
    out.heading = wrap_angle(pose.heading + w * dt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contact resolution
//
// Each obstacle is inflated by the footprint radius (a circle for barrels, a
// rounded rectangle for boxes). The resolved position is the nearest point of
// the free space, found among projections onto single boundary pieces and
// intersections of pairs of pieces.

namespace detail {

struct InflatedObstacle {
  bool is_box{false};
  Vec2 center;
  double radius{0.0};  // barrel: barrel + footprint radius
  Vec2 half_extents;   // box only
  double yaw{0.0};     // box only
  double margin{0.0};  // box only: footprint radius
};

inline double penetration(const InflatedObstacle& o, Vec2 p) {
  if (!o.is_box) return o.radius - norm(p - o.center);
  return o.margin - box_signed_distance(p, o.center, o.half_extents, o.yaw);
}

struct BoundaryCircle {
  Vec2 center;
  double radius;
};

struct BoundarySegment {
  Vec2 a;
  Vec2 b;
};

struct Boundary {
  std::vector<BoundaryCircle> circles;
  std::vector<BoundarySegment> segments;
};

inline void append_boundary(const InflatedObstacle& o, Boundary& out) {
  if (!o.is_box) {
    out.circles.push_back({o.center, o.radius});
    return;
  }
  const double hx = o.half_extents.x;
  const double hy = o.half_extents.y;
  const double m = o.margin;
  auto world = [&](double lx, double ly) { return o.center + rotate(Vec2{lx, ly}, o.yaw); };
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) out.circles.push_back({world(sx * hx, sy * hy), m});
  }
  out.segments.push_back({world(hx + m, -hy), world(hx + m, hy)});
  out.segments.push_back({world(-hx - m, -hy), world(-hx - m, hy)});
  out.segments.push_back({world(-hx, hy + m), world(hx, hy + m)});
  out.segments.push_back({world(-hx, -hy - m), world(hx, -hy - m)});
}

inline Vec2 project_to_circle(Vec2 p, const BoundaryCircle& c, Vec2 fallback_dir) {
  const Vec2 d = p - c.center;
  const double len = norm(d);
  const Vec2 u = len > 1e-12 ? (1.0 / len) * d : fallback_dir;
  return c.center + c.radius * u;
}

inline Vec2 project_to_segment(Vec2 p, const BoundarySegment& s) {
  const Vec2 ab = s.b - s.a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0) : 0.0;
  return s.a + t * ab;
}

inline void intersect(const BoundaryCircle& c1, const BoundaryCircle& c2, std::vector<Vec2>& out) {
  const Vec2 d = c2.center - c1.center;
  const double dist = norm(d);
  if (dist < 1e-12 || dist > c1.radius + c2.radius || dist < std::abs(c1.radius - c2.radius)) return;
  const double a = (c1.radius * c1.radius - c2.radius * c2.radius + dist * dist) / (2.0 * dist);
  const double h2 = c1.radius * c1.radius - a * a;
  const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
  const Vec2 u = (1.0 / dist) * d;
  const Vec2 base = c1.center + a * u;
  const Vec2 perp{-u.y, u.x};
  out.push_back(base + h * perp);
  out.push_back(base - h * perp);
}

inline void intersect(const BoundaryCircle& c, const BoundarySegment& s, std::vector<Vec2>& out) {
  const Vec2 ab = s.b - s.a;
  const double a = dot(ab, ab);
  if (a <= 0.0) return;
  const Vec2 f = s.a - c.center;
  const double b = dot(f, ab);
  const double cc = dot(f, f) - c.radius * c.radius;
  const double disc = b * b - a * cc;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  for (double t : {(-b - sq) / a, (-b + sq) / a}) {
    if (t >= 0.0 && t <= 1.0) out.push_back(s.a + t * ab);
  }
}

inline void intersect(const BoundarySegment& s1, const BoundarySegment& s2, std::vector<Vec2>& out) {
  const Vec2 r = s1.b - s1.a;
  const Vec2 q = s2.b - s2.a;
  const double denom = cross(r, q);
  if (std::abs(denom) < 1e-15) return;
  const Vec2 w = s2.a - s1.a;
  const double t = cross(w, q) / denom;
  const double u = cross(w, r) / denom;
  if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) out.push_back(s1.a + t * r);
}

inline std::vector<InflatedObstacle> inflate(const Scene& scene, double footprint_radius) {
  std::vector<InflatedObstacle> out;
  out.reserve(scene.barrels.size() + scene.boxes.size());
  for (const Barrel& b : scene.barrels) {
    out.push_back({false, b.center, b.radius + footprint_radius, {}, 0.0, 0.0});
  }
  for (const BoxObstacle& b : scene.boxes) {
    out.push_back({true, b.center, 0.0, b.half_extents, b.yaw, footprint_radius});
  }
  return out;
}

inline constexpr double kFreeTolerance = 1e-9;

}  // namespace detail

struct CollisionResult {
  Pose2 pose;
  bool collided{false};
};

/// Largest footprint penetration into any obstacle at `p` (<= 0 when free).
inline double max_penetration(const Scene& scene, Vec2 p, double footprint_radius) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Barrel& b : scene.barrels) worst = std::max(worst, b.radius + footprint_radius - norm(p - b.center));
  for (const BoxObstacle& b : scene.boxes) {
    worst = std::max(worst, footprint_radius - box_signed_distance(p, b.center, b.half_extents, b.yaw));
  }
  return worst;
}

/// Pushes the footprint out of every obstacle it overlaps with the smallest
/// position change; heading is untouched.
inline CollisionResult resolve_collision(const Pose2& candidate, const Scene& scene, double footprint_radius) {
  const Vec2 p{candidate.x, candidate.y};
  std::vector<detail::InflatedObstacle> obstacles = detail::inflate(scene, footprint_radius);

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (detail::penetration(obstacles[i], p) > detail::kFreeTolerance) active.push_back(i);
  }
  if (active.empty()) return {candidate, false};

  const Vec2 backward = -1.0 * heading_vector(candidate.heading);
  auto free_against = [&](Vec2 q, const std::vector<std::size_t>& set) {
    for (std::size_t i : set) {
      if (detail::penetration(obstacles[i], q) > detail::kFreeTolerance) return false;
    }
    return true;
  };

  std::optional<Vec2> resolved;
  constexpr int kMaxRounds = 4;
  for (int round = 0; round < kMaxRounds && !resolved; ++round) {
    detail::Boundary boundary;
    for (std::size_t i : active) detail::append_boundary(obstacles[i], boundary);

    std::vector<Vec2> candidates;
    for (const auto& c : boundary.circles) candidates.push_back(detail::project_to_circle(p, c, backward));
    for (const auto& s : boundary.segments) candidates.push_back(detail::project_to_segment(p, s));
    for (std::size_t i = 0; i < boundary.circles.size(); ++i) {
      for (std::size_t j = i + 1; j < boundary.circles.size(); ++j) {
        detail::intersect(boundary.circles[i], boundary.circles[j], candidates);
      }
      for (const auto& s : boundary.segments) detail::intersect(boundary.circles[i], s, candidates);
    }
    for (std::size_t i = 0; i < boundary.segments.size(); ++i) {
      for (std::size_t j = i + 1; j < boundary.segments.size(); ++j) {
        detail::intersect(boundary.segments[i], boundary.segments[j], candidates);
      }
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](Vec2 a, Vec2 b) { return norm(a - p) < norm(b - p); });
    std::optional<Vec2> best;
    for (Vec2 q : candidates) {
      if (free_against(q, active)) {
        best = q;
        break;
      }
    }
    if (!best) break;

    bool grew = false;
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      if (detail::penetration(obstacles[i], *best) > detail::kFreeTolerance) {
        active.push_back(i);
        grew = true;
      }
    }
    if (!grew) resolved = best;
  }

  if (!resolved) {
    // Pathological multi-contact: keep the least-penetrating candidate seen.
    Vec2 q = p;
    for (int i = 0; i < 8; ++i) {
      for (auto& o : obstacles) {
        const double pen = detail::penetration(o, q);
        if (pen <= 0.0) continue;
        if (!o.is_box) {
          q = detail::project_to_circle(q, {o.center, o.radius}, backward);
        } else {
          detail::Boundary b;
          detail::append_boundary(o, b);
          Vec2 bestq = q;
          double bestd = std::numeric_limits<double>::infinity();
          for (const auto& c : b.circles) {
            Vec2 c2 = detail::project_to_circle(q, c, backward);
            if (detail::penetration(o, c2) <= detail::kFreeTolerance && norm(c2 - q) < bestd) {
              bestd = norm(c2 - q);
              bestq = c2;
            }
          }
          for (const auto& s : b.segments) {
            Vec2 s2 = detail::project_to_segment(q, s);
            if (norm(s2 - q) < bestd) {
              bestd = norm(s2 - q);
              bestq = s2;
            }
          }
          q = bestq;
        }
      }
    }
    resolved = q;
  }
  return {{resolved->x, resolved->y, candidate.heading}, true};
}

/// One physics tick: velocity response, arc integration, contact resolution.
inline RobotState step_world(const RobotState& state, const Scene& scene, const DriveParams& params, double dt) {
  RobotState next = state;
  const Velocities vel = apply_motor_response(state, state.commanded, params, dt);
  next.v = vel.v;
  next.w = vel.w;
  const Pose2 moved = integrate_unicycle(state.pose, vel.v, vel.w, dt);
  const CollisionResult res = resolve_collision(moved, scene, params.footprint_radius);
  next.pose = res.pose;
  next.collided = res.collided;
  return next;
}

}  // namespace igvsim
