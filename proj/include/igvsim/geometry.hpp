// SPDX-License-Identifier: Apache-2.0
// geometry.hpp
// Ray/primitive intersection kernels shared by the LIDAR (2D scan plane) and
// the camera (3D rays against the ground plane and extruded obstacles).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>

namespace igvsim {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Rotates `v` counter-clockwise by `angle` radians.
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Unit vector at `angle` radians CCW from +X.
inline Vec2 heading_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Ray2 {
  Vec2 origin;
  Vec2 dir;  // unit length
};

struct Ray3 {
  Vec3 origin;
  Vec3 dir;  // unit length, z up
};

enum class HitKind { ground, barrel, box };

struct Hit {
  double t{0.0};
  HitKind kind{HitKind::ground};
  std::optional<std::size_t> index;
};

/// Tangent rays whose discriminant is within this of zero are treated as misses.
inline constexpr double kTangentEpsilon = 1e-12;

/// Smallest t >= 0 where the ray meets the circle; exit distance when the
/// origin is inside.
inline std::optional<double> ray_circle_2d(const Ray2& ray, Vec2 center, double radius) {
  const Vec2 oc = ray.origin - center;
  const double b = dot(oc, ray.dir);
  const double c = dot(oc, oc) - radius * radius;
  const double disc = b * b - c;
  if (disc <= kTangentEpsilon) return std::nullopt;
  const double sq = std::sqrt(disc);
  // Stable pair of roots: q has the magnitude of the larger root.
  const double q = b > 0.0 ? -(b + sq) : -(b - sq);
  double t0 = q;
  double t1 = (q != 0.0) ? c / q : -b + sq;
  if (t0 > t1) std::swap(t0, t1);
  if (t0 >= 0.0) return t0;
  if (t1 >= 0.0) return t1;
  return std::nullopt;
}

namespace detail {

// Slab interval for one axis; returns false when the ray misses the slab.
inline bool clip_slab(double origin, double dir, double half, double& tmin, double& tmax) {
  if (std::abs(dir) < 1e-15) {
    return std::abs(origin) <= half;
  }
  double t1 = (-half - origin) / dir;
  double t2 = (half - origin) / dir;
  if (t1 > t2) std::swap(t1, t2);
  tmin = std::max(tmin, t1);
  tmax = std::min(tmax, t2);
  return tmin <= tmax;
}

inline std::optional<double> pick_entry_or_exit(double tmin, double tmax) {
  if (tmax < 0.0) return std::nullopt;
  return tmin >= 0.0 ? tmin : tmax;
}

}  // namespace detail

/// Oriented rectangle hit via slab test in the box frame.
inline std::optional<double> ray_box_2d(const Ray2& ray, Vec2 center, Vec2 half_extents, double yaw) {
  const Vec2 o = rotate(ray.origin - center, -yaw);
  const Vec2 d = rotate(ray.dir, -yaw);
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  if (!detail::clip_slab(o.x, d.x, half_extents.x, tmin, tmax)) return std::nullopt;
  if (!detail::clip_slab(o.y, d.y, half_extents.y, tmin, tmax)) return std::nullopt;
  return detail::pick_entry_or_exit(tmin, tmax);
}

/// Intersection with the ground plane z = 0.
inline std::optional<Vec3> ray_ground(const Ray3& ray) {
  if (ray.dir.z >= 0.0 || ray.origin.z <= 0.0) return std::nullopt;
  const double t = -ray.origin.z / ray.dir.z;
  return Vec3{ray.origin.x + t * ray.dir.x, ray.origin.y + t * ray.dir.y, 0.0};
}

/// Distance along the ray to the ground plane, when it is hit.
inline std::optional<double> ray_ground_t(const Ray3& ray) {
  if (ray.dir.z >= 0.0 || ray.origin.z <= 0.0) return std::nullopt;
  return -ray.origin.z / ray.dir.z;
}

/// Vertical cylinder standing on z = 0: lateral surface within [0, height]
/// or the top cap.
inline std::optional<double> ray_cylinder(const Ray3& ray, Vec2 center, double radius, double height) {
  std::optional<double> best;
  auto consider = [&](double t) {
    if (t >= 0.0 && (!best || t < *best)) best = t;
  };

  const double ox = ray.origin.x - center.x;
  const double oy = ray.origin.y - center.y;
  const double a = ray.dir.x * ray.dir.x + ray.dir.y * ray.dir.y;
  if (a > 1e-18) {
    const double b = ox * ray.dir.x + oy * ray.dir.y;
    const double c = ox * ox + oy * oy - radius * radius;
    const double disc = b * b - a * c;
    if (disc > kTangentEpsilon * a) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / a, (-b + sq) / a}) {
        const double z = ray.origin.z + t * ray.dir.z;
        if (z >= 0.0 && z <= height) consider(t);
      }
    }
  }
  if (std::abs(ray.dir.z) > 1e-15) {
    const double t = (height - ray.origin.z) / ray.dir.z;
    const double px = ox + t * ray.dir.x;
    const double py = oy + t * ray.dir.y;
    if (px * px + py * py <= radius * radius) consider(t);
  }
  return best;
}

/// Oriented box footprint extruded over z in [0, height].
inline std::optional<double> ray_prism(const Ray3& ray, Vec2 center, Vec2 half_extents, double yaw,
                                       double height) {
  const Vec2 o = rotate(Vec2{ray.origin.x, ray.origin.y} - center, -yaw);
  const Vec2 d = rotate(Vec2{ray.dir.x, ray.dir.y}, -yaw);
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  if (!detail::clip_slab(o.x, d.x, half_extents.x, tmin, tmax)) return std::nullopt;
  if (!detail::clip_slab(o.y, d.y, half_extents.y, tmin, tmax)) return std::nullopt;
  const double half_h = 0.5 * height;
  if (!detail::clip_slab(ray.origin.z - half_h, ray.dir.z, half_h, tmin, tmax)) return std::nullopt;
  return detail::pick_entry_or_exit(tmin, tmax);
}

/// Distance from p to segment [a, b].
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return norm(p - (a + s * ab));
}

/// Distance from p to a polyline centerline (capsule caps at the endpoints).
inline double polyline_distance(Vec2 p, std::span<const Vec2> points) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  if (points.size() == 1) return norm(p - points.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    best = std::min(best, point_segment_distance(p, points[i], points[i + 1]));
  }
  return best;
}

/// Signed distance from p to an oriented rectangle (negative inside).
inline double box_signed_distance(Vec2 p, Vec2 center, Vec2 half_extents, double yaw) {
  const Vec2 local = rotate(p - center, -yaw);
  const double qx = std::abs(local.x) - half_extents.x;
  const double qy = std::abs(local.y) - half_extents.y;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside;
}

}  // namespace igvsim
