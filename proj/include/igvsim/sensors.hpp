// SPDX-License-Identifier: Apache-2.0
// sensors.hpp
// Pose-to-measurement models for the LIDAR, GPS, compass and camera, and the
// fixed-cadence freshness clock that decides when each one has new data.
#pragma once

#include "igvsim/dynamics.hpp"
#include "igvsim/geometry.hpp"
#include "igvsim/measurements.hpp"
#include "igvsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace igvsim {

/// Seeded generator shared by the noise models.
using SensorRng = std::mt19937_64;

// ---------------------------------------------------------------------------
// LIDAR

struct LidarConfig {
  double fov{240.0};  // degrees, total
  int beams{683};
  double max_range{5.6};
  double min_range{0.02};
  double mount_height{0.4};
  double mount_forward_offset{0.0};
  double rate{10.0};  // Hz
  double noise_std{0.0};

  bool valid() const {
    return beams >= 2 && min_range >= 0.0 && min_range < max_range && fov > 0.0 && fov <= 360.0 && rate >= 0.0 &&
           noise_std >= 0.0;
  }
};

/// Angle of beam i relative to the robot heading, in radians.
inline double lidar_beam_offset(const LidarConfig& cfg, int i) {
  return deg_to_rad(-0.5 * cfg.fov + static_cast<double>(i) * cfg.fov / static_cast<double>(cfg.beams - 1));
}

inline Vec2 lidar_origin(const Pose2& pose, const LidarConfig& cfg) {
  return Vec2{pose.x, pose.y} + cfg.mount_forward_offset * heading_vector(pose.heading);
}

/// Nearest obstacle along a scan-plane ray, ignoring anything the scan plane
/// passes over. Returns nullopt when nothing is hit.
inline std::optional<double> cast_scan_ray(const Scene& scene, const Ray2& ray, double mount_height) {
  std::optional<double> best;
  for (const Barrel& b : scene.barrels) {
    if (b.height <= mount_height) continue;
    if (auto t = ray_circle_2d(ray, b.center, b.radius); t && (!best || *t < *best)) best = t;
  }
  for (const BoxObstacle& b : scene.boxes) {
    if (b.height <= mount_height) continue;
    if (auto t = ray_box_2d(ray, b.center, b.half_extents, b.yaw); t && (!best || *t < *best)) best = t;
  }
  return best;
}

inline LidarScan scan_lidar(const Scene& scene, const RobotState& state, const LidarConfig& cfg, SensorRng& rng) {
  if (!cfg.valid()) throw std::invalid_argument("invalid LIDAR configuration");
  LidarScan scan;
  scan.ranges.resize(static_cast<std::size_t>(cfg.beams));
  const Vec2 origin = lidar_origin(state.pose, cfg);
  std::normal_distribution<double> noise(0.0, cfg.noise_std > 0.0 ? cfg.noise_std : 1.0);
  for (int i = 0; i < cfg.beams; ++i) {
    const Ray2 ray{origin, heading_vector(state.pose.heading + lidar_beam_offset(cfg, i))};
    const std::optional<double> t = cast_scan_ray(scene, ray, cfg.mount_height);
    double r = cfg.max_range;
    if (t) {
      r = std::clamp(*t, cfg.min_range, cfg.max_range);
      if (cfg.noise_std > 0.0) r = std::clamp(r + noise(rng), cfg.min_range, cfg.max_range);
    }
    scan.ranges[static_cast<std::size_t>(i)] = r;
  }
  return scan;
}

// ---------------------------------------------------------------------------
// GPS and compass

/// Meters per degree of latitude on the equatorial-radius sphere.
inline constexpr double kMetersPerDegree = kPi / 180.0 * 6378137.0;

/// Equirectangular tangent-plane mapping anchored at the scene origin.
inline GpsFix gps_from_pose(const Pose2& pose, const GeoOrigin& geo) {
  const double lon_scale = kMetersPerDegree * std::cos(deg_to_rad(geo.lat0));
  return {geo.lat0 + pose.y / kMetersPerDegree, geo.lon0 + pose.x / lon_scale};
}

/// Inverse of gps_from_pose: east/north meters of a fix.
inline Vec2 position_from_gps(const GpsFix& fix, const GeoOrigin& geo) {
  const double lon_scale = kMetersPerDegree * std::cos(deg_to_rad(geo.lat0));
  return {(fix.lon - geo.lon0) * lon_scale, (fix.lat - geo.lat0) * kMetersPerDegree};
}

/// GPS with optional Gaussian noise (meters, applied in the tangent plane).
inline GpsFix measure_gps(const Pose2& pose, const GeoOrigin& geo, double noise_std, SensorRng& rng) {
  if (noise_std <= 0.0) return gps_from_pose(pose, geo);
  std::normal_distribution<double> n(0.0, noise_std);
  Pose2 noisy = pose;
  noisy.x += n(rng);
  noisy.y += n(rng);
  return gps_from_pose(noisy, geo);
}

inline double compass_degrees(double degrees) {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h = 0.0;
  return h;
}

/// ENU heading (radians CCW from east) to compass heading (degrees CW from north).
inline HeadingReading compass_from_pose(const Pose2& pose) {
  return {compass_degrees(90.0 - rad_to_deg(pose.heading))};
}

inline HeadingReading measure_compass(const Pose2& pose, double noise_std_deg, SensorRng& rng) {
  HeadingReading h = compass_from_pose(pose);
  if (noise_std_deg > 0.0) {
    std::normal_distribution<double> n(0.0, noise_std_deg);
    h.heading = compass_degrees(h.heading + n(rng));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Camera

struct CameraMount {
  Vec3 offset{0.2, 0.0, 1.0};  // robot frame: forward, left, up
  double pitch{20.0};          // degrees below horizontal
  double hfov{60.0};           // degrees
  int width{160};
  int height{120};
  double rate{10.0};  // Hz

  bool valid() const {
    return width > 0 && height > 0 && width <= 65535 && height <= 65535 &&
           static_cast<long long>(width) * height <= 1'000'000 && hfov > 0.0 && hfov < 180.0 && rate >= 0.0;
  }
  double focal_px() const { return 0.5 * width / std::tan(deg_to_rad(0.5 * hfov)); }
  double vfov() const { return rad_to_deg(2.0 * std::atan(0.5 * height / focal_px())); }
};

inline constexpr Rgb8 kBarrelOrange{214, 80, 20};
inline constexpr Rgb8 kBarrelStripe{255, 255, 255};
inline constexpr Rgb8 kBoxGray{200, 200, 200};
inline constexpr Rgb8 kSky{170, 200, 235};

/// Barrel colour at relative height z/h: orange with two reflective bands.
inline Rgb8 barrel_color(double relative_height) {
  const bool band = (relative_height >= 0.3 && relative_height <= 0.45) ||
                    (relative_height >= 0.6 && relative_height <= 0.75);
  return band ? kBarrelStripe : kBarrelOrange;
}

/// Camera pose in the world: position plus the orthonormal forward/left/up
/// basis after pitching down.
struct CameraBasis {
  Vec3 position;
  Vec3 forward;
  Vec3 left;
  Vec3 up;
  double focal{1.0};  // pixels
};

inline CameraBasis camera_basis(const Pose2& pose, const CameraMount& mount) {
  const Vec2 fwd2 = heading_vector(pose.heading);
  const Vec2 left2{-fwd2.y, fwd2.x};
  const Vec2 pos2 = Vec2{pose.x, pose.y} + mount.offset.x * fwd2 + mount.offset.y * left2;
  const double p = deg_to_rad(mount.pitch);
  const double cp = std::cos(p);
  const double sp = std::sin(p);
  CameraBasis b;
  b.position = {pos2.x, pos2.y, mount.offset.z};
  b.forward = {cp * fwd2.x, cp * fwd2.y, -sp};
  b.left = {left2.x, left2.y, 0.0};
  b.up = {sp * fwd2.x, sp * fwd2.y, cp};
  b.focal = mount.focal_px();
  return b;
}

/// Ray through the centre of pixel (col, row).
inline Ray3 camera_ray(const CameraBasis& basis, const CameraMount& mount, int col, int row) {
  const double f = basis.focal;
  const double u = (static_cast<double>(col) + 0.5) - 0.5 * mount.width;   // right of centre
  const double v = 0.5 * mount.height - (static_cast<double>(row) + 0.5);  // above centre
  Vec3 d = f * basis.forward + (-u) * basis.left + v * basis.up;
  d = (1.0 / norm(d)) * d;
  return {basis.position, d};
}

inline Ray3 camera_ray(const Pose2& pose, const CameraMount& mount, int col, int row) {
  return camera_ray(camera_basis(pose, mount), mount, col, row);
}

namespace detail {

struct ScreenRect {
  int c0{0};
  int c1{-1};
  int r0{0};
  int r1{-1};
};

// Conservative image-space bounds of a set of world points (the corners of an
// obstacle's bounding box). Empty when everything is behind the camera.
template <std::size_t N>
ScreenRect project_bounds(const CameraBasis& basis, const CameraMount& mount, const Vec3 (&corners)[N]) {
  const double f = mount.focal_px();
  bool any_front = false;
  bool any_behind = false;
  double cmin = std::numeric_limits<double>::infinity();
  double cmax = -cmin;
  double rmin = cmin;
  double rmax = -cmin;
  for (const Vec3& w : corners) {
    const Vec3 d = w - basis.position;
    const double fz = dot(d, basis.forward);
    if (fz <= 1e-6) {
      any_behind = true;
      continue;
    }
    any_front = true;
    const double col = 0.5 * mount.width - f * dot(d, basis.left) / fz;
    const double row = 0.5 * mount.height - f * dot(d, basis.up) / fz;
    cmin = std::min(cmin, col);
    cmax = std::max(cmax, col);
    rmin = std::min(rmin, row);
    rmax = std::max(rmax, row);
  }
  if (!any_front) return {};
  if (any_behind) return {0, mount.width - 1, 0, mount.height - 1};
  ScreenRect r;
  r.c0 = std::max(0, static_cast<int>(std::floor(cmin)) - 1);
  r.c1 = std::min(mount.width - 1, static_cast<int>(std::ceil(cmax)) + 1);
  r.r0 = std::max(0, static_cast<int>(std::floor(rmin)) - 1);
  r.r1 = std::min(mount.height - 1, static_cast<int>(std::ceil(rmax)) + 1);
  return r;
}

}  // namespace detail

/// Pinhole render of the scene: nearest of barrels, boxes and ground, sky
/// otherwise. No lighting, no anti-aliasing.
inline CameraFrame render_camera(const Scene& scene, const RobotState& state, const CameraMount& mount) {
  if (!mount.valid()) throw std::invalid_argument("invalid camera mount");
  const CameraBasis basis = camera_basis(state.pose, mount);

  // Screen-space culling: only obstacles whose projected bounds cover a pixel
  // are intersected for it.
  struct Candidate {
    bool is_box;
    std::size_t index;
    detail::ScreenRect rect;
  };
  std::vector<Candidate> visible;
  for (std::size_t i = 0; i < scene.barrels.size(); ++i) {
    const Barrel& b = scene.barrels[i];
    const double x0 = b.center.x - b.radius, x1 = b.center.x + b.radius;
    const double y0 = b.center.y - b.radius, y1 = b.center.y + b.radius;
    const Vec3 corners[8] = {{x0, y0, 0}, {x1, y0, 0}, {x0, y1, 0}, {x1, y1, 0},
                             {x0, y0, b.height}, {x1, y0, b.height}, {x0, y1, b.height}, {x1, y1, b.height}};
    const detail::ScreenRect r = detail::project_bounds(basis, mount, corners);
    if (r.c0 <= r.c1 && r.r0 <= r.r1) visible.push_back({false, i, r});
  }
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    const BoxObstacle& b = scene.boxes[i];
    Vec3 corners[8];
    int k = 0;
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        const Vec2 c = b.center + rotate(Vec2{sx * b.half_extents.x, sy * b.half_extents.y}, b.yaw);
        corners[k++] = {c.x, c.y, 0.0};
        corners[k++] = {c.x, c.y, b.height};
      }
    }
    const detail::ScreenRect r = detail::project_bounds(basis, mount, corners);
    if (r.c0 <= r.c1 && r.r0 <= r.r1) visible.push_back({true, i, r});
  }

  const GroundShader ground(scene);
  CameraFrame frame;
  frame.width = mount.width;
  frame.height = mount.height;
  frame.pixels.resize(static_cast<std::size_t>(mount.width) * static_cast<std::size_t>(mount.height) * 3);
  const auto w = static_cast<std::size_t>(mount.width);
  std::vector<Ray3> rays(w);
  std::vector<double> best_t(w);
  std::vector<Rgb8> color(w);
  std::size_t out = 0;
  for (int row = 0; row < mount.height; ++row) {
    for (int col = 0; col < mount.width; ++col) rays[static_cast<std::size_t>(col)] = camera_ray(basis, mount, col, row);
    std::fill(best_t.begin(), best_t.end(), std::numeric_limits<double>::infinity());
    std::fill(color.begin(), color.end(), kSky);
    for (const Candidate& c : visible) {
      if (row < c.rect.r0 || row > c.rect.r1) continue;
      for (auto col = static_cast<std::size_t>(c.rect.c0); col <= static_cast<std::size_t>(c.rect.c1); ++col) {
        const Ray3& ray = rays[col];
        if (c.is_box) {
          const BoxObstacle& b = scene.boxes[c.index];
          if (auto t = ray_prism(ray, b.center, b.half_extents, b.yaw, b.height); t && *t < best_t[col]) {
            best_t[col] = *t;
            color[col] = kBoxGray;
          }
        } else {
          const Barrel& b = scene.barrels[c.index];
          if (auto t = ray_cylinder(ray, b.center, b.radius, b.height); t && *t < best_t[col]) {
            best_t[col] = *t;
            color[col] = barrel_color((ray.origin.z + *t * ray.dir.z) / b.height);
          }
        }
      }
    }
    for (std::size_t col = 0; col < w; ++col) {
      if (auto tg = ray_ground_t(rays[col]); tg && *tg < best_t[col]) {
        const auto hit = ray_ground(rays[col]);
        color[col] = ground.color_at({hit->x, hit->y});
      }
      frame.pixels[out++] = color[col].r;
      frame.pixels[out++] = color[col].g;
      frame.pixels[out++] = color[col].b;
    }
  }
  return frame;
}

// ---------------------------------------------------------------------------
// Freshness

/// Fixed-cadence emission schedule; the k-th emission is due at k / rate.
class FreshnessClock {
 public:
  FreshnessClock() = default;
  explicit FreshnessClock(double rate) : rate_(rate) {}

  double rate() const { return rate_; }
  std::uint64_t fired() const { return fired_; }
  double next_due() const {
    return rate_ > 0.0 ? static_cast<double>(fired_ + 1) / rate_ : std::numeric_limits<double>::infinity();
  }

  /// Fires at most once per call, when sim_time has reached next_due().
  bool poll_due(double sim_time) {
    if (rate_ <= 0.0 || sim_time < next_due()) return false;
    ++fired_;
    return true;
  }

 private:
  double rate_{0.0};
  std::uint64_t fired_{0};
};

inline bool poll_due(FreshnessClock& clock, double sim_time) { return clock.poll_due(sim_time); }

}  // namespace igvsim
