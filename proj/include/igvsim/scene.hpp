// SPDX-License-Identifier: Apache-2.0
// scene.hpp
// Course data model, its JSON file format and the procedural ground colouring.
#pragma once

#include "igvsim/geometry.hpp"
#include "igvsim/measurements.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace igvsim {

struct GeoOrigin {
  double lat0{0.0};  // degrees
  double lon0{0.0};  // degrees
  friend bool operator==(const GeoOrigin&, const GeoOrigin&) = default;
};

struct Barrel {
  Vec2 center;
  double radius{0.28};
  double height{1.0};
  friend bool operator==(const Barrel&, const Barrel&) = default;
};

struct BoxObstacle {
  Vec2 center;
  Vec2 half_extents{0.5, 0.5};
  double yaw{0.0};  // radians
  double height{1.0};
  friend bool operator==(const BoxObstacle&, const BoxObstacle&) = default;
};

struct LinePath {
  std::vector<Vec2> points;
  double width{0.08};
  double intensity{1.0};
  friend bool operator==(const LinePath&, const LinePath&) = default;
};

struct TerrainStyle {
  Rgb8 grass_base{64, 128, 48};
  double noise_amplitude{0.15};
  double noise_scale{0.5};  // meters per noise cell
  std::int64_t noise_seed{0};
  friend bool operator==(const TerrainStyle&, const TerrainStyle&) = default;
};

/// Planar pose; heading in radians CCW from +X (east).
struct Pose2 {
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct GoalRegion {
  Vec2 center;
  double radius{1.0};
  friend bool operator==(const GoalRegion&, const GoalRegion&) = default;
};

struct Scene {
  GeoOrigin geo;
  TerrainStyle terrain;
  std::vector<LinePath> lines;
  std::vector<Barrel> barrels;
  std::vector<BoxObstacle> boxes;
  Pose2 spawn;
  std::optional<GoalRegion> goal;
  friend bool operator==(const Scene&, const Scene&) = default;
};

inline constexpr Rgb8 kPaintWhite{235, 235, 225};
inline constexpr double kPaintNoise = 8.0;

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance from p to the centerline of a painted line.
inline double point_band_distance(Vec2 p, const LinePath& path) { return polyline_distance(p, path.points); }

inline bool on_paint(Vec2 p, const LinePath& path) { return point_band_distance(p, path) <= 0.5 * path.width; }

// ---------------------------------------------------------------------------
// Value noise. Lattice corners hash to [0,1) and are blended bilinearly, so
// the field is reproducible bit-for-bit from (seed, salt, point).

inline std::uint32_t lattice_hash(std::int64_t ix, std::int64_t iy, std::int64_t seed, std::uint32_t salt) {
  std::uint32_t h = static_cast<std::uint32_t>(ix) * 0x8da6b343u;
  h ^= static_cast<std::uint32_t>(iy) * 0xd8163841u;
  h ^= static_cast<std::uint32_t>(seed) * 0xcb1ab31fu;
  h ^= static_cast<std::uint32_t>(static_cast<std::uint64_t>(seed) >> 32) * 0x9e3779b1u;
  h ^= salt * 0x85ebca6bu;
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  return h;
}

inline double lattice_value(std::int64_t ix, std::int64_t iy, std::int64_t seed, std::uint32_t salt) {
  return static_cast<double>(lattice_hash(ix, iy, seed, salt) >> 8) * (1.0 / 16777216.0);
}

/// Bilinear value noise in [0,1) with one lattice cell per `scale` meters.
inline double value_noise(Vec2 p, double scale, std::int64_t seed, std::uint32_t salt) {
  const double gx = p.x / scale;
  const double gy = p.y / scale;
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  const double tx = gx - fx;
  const double ty = gy - fy;
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double v00 = lattice_value(ix, iy, seed, salt);
  const double v10 = lattice_value(ix + 1, iy, seed, salt);
  const double v01 = lattice_value(ix, iy + 1, seed, salt);
  const double v11 = lattice_value(ix + 1, iy + 1, seed, salt);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

namespace detail {
// clamp(round(v), 0, 255) with round-half-away-from-zero, minus the libm call.
inline std::uint8_t to_channel(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  const auto t = static_cast<int>(v);
  return static_cast<std::uint8_t>(v - t >= 0.5 ? t + 1 : t);
}
}  // namespace detail

/// Colour of the ground plane at p. Paint wins over grass; noise amplitude 0
/// turns every noise term off.
inline Rgb8 ground_color_at(const Scene& scene, Vec2 p) {
  const TerrainStyle& t = scene.terrain;
  for (const LinePath& line : scene.lines) {
    if (!on_paint(p, line)) continue;
    const double base[3] = {kPaintWhite.r * line.intensity, kPaintWhite.g * line.intensity,
                            kPaintWhite.b * line.intensity};
    double out[3];
    for (std::uint32_t c = 0; c < 3; ++c) {
      double offset = 0.0;
      if (t.noise_amplitude > 0.0) {
        offset = kPaintNoise * (2.0 * value_noise(p, t.noise_scale, t.noise_seed, c + 1) - 1.0);
      }
      out[c] = base[c] + offset;
    }
    return {detail::to_channel(out[0]), detail::to_channel(out[1]), detail::to_channel(out[2])};
  }
  const double n = value_noise(p, t.noise_scale, t.noise_seed, 0);
  const double factor = 1.0 + t.noise_amplitude * (2.0 * n - 1.0);
  return {detail::to_channel(t.grass_base.r * factor), detail::to_channel(t.grass_base.g * factor),
          detail::to_channel(t.grass_base.b * factor)};
}

/// ground_color_at with the paint test served from a uniform grid of line
/// segments. Returns identical colours. Keeps a one-cell noise cache, so one
/// instance per thread.
class GroundShader {
 public:
  explicit GroundShader(const Scene& scene) : scene_(scene) {
    bool any = false;
    for (const LinePath& line : scene.lines) {
      const double hw = 0.5 * line.width;
      for (const Vec2& q : line.points) {
        if (!any) {
          lo_ = hi_ = q;
          any = true;
        }
        lo_ = {std::min(lo_.x, q.x - hw), std::min(lo_.y, q.y - hw)};
        hi_ = {std::max(hi_.x, q.x + hw), std::max(hi_.y, q.y + hw)};
      }
    }
    if (!any) return;
    const double extent = std::max(hi_.x - lo_.x, hi_.y - lo_.y);
    cell_ = std::max(0.5, extent / 512.0);
    nx_ = static_cast<int>(std::floor((hi_.x - lo_.x) / cell_)) + 1;
    ny_ = static_cast<int>(std::floor((hi_.y - lo_.y) / cell_)) + 1;
    cells_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
    for (std::uint32_t li = 0; li < scene.lines.size(); ++li) {
      const LinePath& line = scene.lines[li];
      const double hw = 0.5 * line.width;
      const std::size_t segs = line.points.size() < 2 ? line.points.size() : line.points.size() - 1;
      for (std::uint32_t si = 0; si < segs; ++si) {
        const Vec2 a = line.points[si];
        const Vec2 b = line.points.size() < 2 ? a : line.points[si + 1];
        const int cx0 = cell_x(std::min(a.x, b.x) - hw), cx1 = cell_x(std::max(a.x, b.x) + hw);
        const int cy0 = cell_y(std::min(a.y, b.y) - hw), cy1 = cell_y(std::max(a.y, b.y) + hw);
        for (int cy = cy0; cy <= cy1; ++cy) {
          for (int cx = cx0; cx <= cx1; ++cx) cells_[index(cx, cy)].push_back({li, si});
        }
      }
    }
  }

  Rgb8 color_at(Vec2 p) const {
    const TerrainStyle& t = scene_.terrain;
    if (const LinePath* line = paint_at(p)) {
      const double base[3] = {kPaintWhite.r * line->intensity, kPaintWhite.g * line->intensity,
                              kPaintWhite.b * line->intensity};
      double out[3];
      for (std::uint32_t c = 0; c < 3; ++c) {
        double offset = 0.0;
        if (t.noise_amplitude > 0.0) {
          offset = kPaintNoise * (2.0 * value_noise(p, t.noise_scale, t.noise_seed, c + 1) - 1.0);
        }
        out[c] = base[c] + offset;
      }
      return {detail::to_channel(out[0]), detail::to_channel(out[1]), detail::to_channel(out[2])};
    }
    const double n = grass_noise(p);
    const double factor = 1.0 + t.noise_amplitude * (2.0 * n - 1.0);
    return {detail::to_channel(t.grass_base.r * factor), detail::to_channel(t.grass_base.g * factor),
            detail::to_channel(t.grass_base.b * factor)};
  }

 private:
  // value_noise(p, scale, seed, 0), reusing the lattice corners of the last
  // cell: neighbouring pixels mostly land in the same one.
  double grass_noise(Vec2 p) const {
    const TerrainStyle& t = scene_.terrain;
    const double gx = p.x / t.noise_scale;
    const double gy = p.y / t.noise_scale;
    const double fx = std::floor(gx);
    const double fy = std::floor(gy);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    if (!corners_valid_ || ix != cix_ || iy != ciy_) {
      corner_[0] = lattice_value(ix, iy, t.noise_seed, 0);
      corner_[1] = lattice_value(ix + 1, iy, t.noise_seed, 0);
      corner_[2] = lattice_value(ix, iy + 1, t.noise_seed, 0);
      corner_[3] = lattice_value(ix + 1, iy + 1, t.noise_seed, 0);
      cix_ = ix;
      ciy_ = iy;
      corners_valid_ = true;
    }
    const double tx = gx - fx;
    const double ty = gy - fy;
    const double a = corner_[0] + (corner_[1] - corner_[0]) * tx;
    const double b = corner_[2] + (corner_[3] - corner_[2]) * tx;
    return a + (b - a) * ty;
  }

  struct SegmentRef {
    std::uint32_t line;
    std::uint32_t segment;
  };

  // First line (in scene order) whose band contains p.
  const LinePath* paint_at(Vec2 p) const {
    if (cells_.empty() || !(p.x >= lo_.x && p.x <= hi_.x && p.y >= lo_.y && p.y <= hi_.y)) return nullptr;
    const std::vector<SegmentRef>& refs = cells_[index(cell_x(p.x), cell_y(p.y))];
    const LinePath* first = nullptr;
    std::uint32_t first_index = 0;
    for (const SegmentRef& r : refs) {
      if (first != nullptr && r.line >= first_index) continue;
      const LinePath& line = scene_.lines[r.line];
      const double d = line.points.size() < 2
                           ? norm(p - line.points[r.segment])
                           : point_segment_distance(p, line.points[r.segment], line.points[r.segment + 1]);
      if (d <= 0.5 * line.width) {
        first = &line;
        first_index = r.line;
      }
    }
    return first;
  }

  int cell_x(double x) const { return std::clamp(static_cast<int>(std::floor((x - lo_.x) / cell_)), 0, nx_ - 1); }
  int cell_y(double y) const { return std::clamp(static_cast<int>(std::floor((y - lo_.y) / cell_)), 0, ny_ - 1); }
  std::size_t index(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(cx);
  }

  const Scene& scene_;
  Vec2 lo_{}, hi_{};
  double cell_{1.0};
  int nx_{0}, ny_{0};
  std::vector<std::vector<SegmentRef>> cells_;
  mutable bool corners_valid_{false};
  mutable std::int64_t cix_{0}, ciy_{0};
  mutable double corner_[4]{};
};

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate_scene(const Scene& scene) {
  std::vector<std::string> out;
  auto bad = [](double v) { return !std::isfinite(v); };

  if (bad(scene.geo.lat0) || scene.geo.lat0 < -90.0 || scene.geo.lat0 > 90.0) {
    out.push_back("geo.lat0 outside [-90, 90]");
  }
  if (bad(scene.geo.lon0) || scene.geo.lon0 < -180.0 || scene.geo.lon0 > 180.0) {
    out.push_back("geo.lon0 outside [-180, 180]");
  }
  if (std::abs(scene.geo.lat0) >= 89.0) out.push_back("geo.lat0 too close to a pole (|lat0| >= 89)");

  const TerrainStyle& t = scene.terrain;
  if (bad(t.noise_amplitude) || t.noise_amplitude < 0.0 || t.noise_amplitude > 1.0) {
    out.push_back("terrain.noise_amplitude outside [0, 1]");
  }
  if (bad(t.noise_scale) || t.noise_scale <= 0.0) out.push_back("terrain.noise_scale must be > 0");

  for (std::size_t i = 0; i < scene.lines.size(); ++i) {
    const LinePath& l = scene.lines[i];
    const std::string tag = "lines[" + std::to_string(i) + "]";
    if (l.points.size() < 2) out.push_back(tag + ": needs at least 2 points");
    for (std::size_t k = 0; k + 1 < l.points.size(); ++k) {
      if (l.points[k] == l.points[k + 1]) {
        out.push_back(tag + ": degenerate polyline (repeated point " + std::to_string(k + 1) + ")");
      }
    }
    for (const Vec2& p : l.points) {
      if (bad(p.x) || bad(p.y)) out.push_back(tag + ": non-finite point");
    }
    if (bad(l.width) || l.width <= 0.0) out.push_back(tag + ": width must be > 0");
    if (bad(l.intensity) || l.intensity < 0.0 || l.intensity > 1.0) out.push_back(tag + ": intensity outside [0, 1]");
  }
  for (std::size_t i = 0; i < scene.barrels.size(); ++i) {
    const Barrel& b = scene.barrels[i];
    const std::string tag = "barrels[" + std::to_string(i) + "]";
    if (bad(b.radius) || b.radius <= 0.0) out.push_back(tag + ": radius must be > 0");
    if (bad(b.height) || b.height <= 0.0) out.push_back(tag + ": height must be > 0");
    if (bad(b.center.x) || bad(b.center.y)) out.push_back(tag + ": non-finite center");
  }
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    const BoxObstacle& b = scene.boxes[i];
    const std::string tag = "boxes[" + std::to_string(i) + "]";
    if (bad(b.half_extents.x) || bad(b.half_extents.y) || b.half_extents.x <= 0.0 || b.half_extents.y <= 0.0) {
      out.push_back(tag + ": half extents must be > 0");
    }
    if (bad(b.height) || b.height <= 0.0) out.push_back(tag + ": height must be > 0");
    if (bad(b.center.x) || bad(b.center.y) || bad(b.yaw)) out.push_back(tag + ": non-finite placement");
  }
  if (scene.goal && (bad(scene.goal->radius) || scene.goal->radius <= 0.0)) out.push_back("goal.radius must be > 0");

  const Vec2 spawn{scene.spawn.x, scene.spawn.y};
  if (bad(spawn.x) || bad(spawn.y) || bad(scene.spawn.heading)) out.push_back("spawn: non-finite pose");
  for (std::size_t i = 0; i < scene.barrels.size(); ++i) {
    const Barrel& b = scene.barrels[i];
    if (norm(spawn - b.center) <= b.radius) {
      out.push_back("spawn overlaps obstacle barrels[" + std::to_string(i) + "]");
    }
  }
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    const BoxObstacle& b = scene.boxes[i];
    if (box_signed_distance(spawn, b.center, b.half_extents, b.yaw) <= 0.0) {
      out.push_back("spawn overlaps obstacle boxes[" + std::to_string(i) + "]");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON scene file

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw SceneError(std::string(where) + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view k : allowed) known = known || (k == it.key());
    if (!known) throw SceneError(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

inline double number_at(const json& obj, std::string_view where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SceneError(std::string(where) + ": missing required key \"" + key + "\"");
  if (!it->is_number()) throw SceneError(std::string(where) + "." + key + ": expected a number");
  return it->get<double>();
}

inline double number_or(const json& obj, std::string_view where, const char* key, double fallback) {
  return obj.contains(key) ? number_at(obj, where, key) : fallback;
}

inline Vec2 point_from(const json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SceneError(std::string(where) + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline const json& array_at(const json& root, const char* key) {
  const json& arr = root.at(key);
  if (!arr.is_array()) throw SceneError(std::string(key) + ": expected an array");
  return arr;
}

}  // namespace detail

/// Parses the JSON scene format. Unknown keys are errors; `geo` and `spawn`
/// are required, everything else defaults.
inline Scene parse_scene(std::string_view text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SceneError("scene syntax error at " + detail::line_col(text, e.byte) + ": " + e.what());
  }
  detail::reject_unknown_keys(root, "scene", {"geo", "spawn", "terrain", "lines", "barrels", "boxes", "goal"});
  if (!root.contains("geo")) throw SceneError("scene: missing required section \"geo\"");
  if (!root.contains("spawn")) throw SceneError("scene: missing required section \"spawn\"");

  Scene s;
  const json& geo = root.at("geo");
  detail::reject_unknown_keys(geo, "geo", {"lat0", "lon0"});
  s.geo.lat0 = detail::number_at(geo, "geo", "lat0");
  s.geo.lon0 = detail::number_at(geo, "geo", "lon0");

  const json& spawn = root.at("spawn");
  detail::reject_unknown_keys(spawn, "spawn", {"x", "y", "heading_deg"});
  s.spawn.x = detail::number_at(spawn, "spawn", "x");
  s.spawn.y = detail::number_at(spawn, "spawn", "y");
  s.spawn.heading = deg_to_rad(detail::number_or(spawn, "spawn", "heading_deg", 0.0));

  if (root.contains("terrain")) {
    const json& t = root.at("terrain");
    detail::reject_unknown_keys(t, "terrain", {"grass_base", "noise_amplitude", "noise_scale", "noise_seed"});
    if (t.contains("grass_base")) {
      const json& c = t.at("grass_base");
      if (!c.is_array() || c.size() != 3) throw SceneError("terrain.grass_base: expected [r, g, b]");
      std::array<std::uint8_t, 3> rgb{};
      for (std::size_t i = 0; i < 3; ++i) {
        if (!c[i].is_number_integer() || c[i].get<std::int64_t>() < 0 || c[i].get<std::int64_t>() > 255) {
          throw SceneError("terrain.grass_base: channels must be integers in [0, 255]");
        }
        rgb[i] = static_cast<std::uint8_t>(c[i].get<std::int64_t>());
      }
      s.terrain.grass_base = {rgb[0], rgb[1], rgb[2]};
    }
    s.terrain.noise_amplitude = detail::number_or(t, "terrain", "noise_amplitude", s.terrain.noise_amplitude);
    s.terrain.noise_scale = detail::number_or(t, "terrain", "noise_scale", s.terrain.noise_scale);
    if (t.contains("noise_seed")) {
      if (!t.at("noise_seed").is_number_integer()) throw SceneError("terrain.noise_seed: expected an integer");
      s.terrain.noise_seed = t.at("noise_seed").get<std::int64_t>();
    }
  }

  if (root.contains("lines")) {
    const json& lines = detail::array_at(root, "lines");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string where = "lines[" + std::to_string(i) + "]";
      const json& l = lines[i];
      detail::reject_unknown_keys(l, where, {"points", "width", "intensity"});
      LinePath path;
      if (!l.contains("points") || !l.at("points").is_array()) throw SceneError(where + ": missing \"points\" array");
      for (const json& p : l.at("points")) path.points.push_back(detail::point_from(p, where + ".points"));
      path.width = detail::number_at(l, where, "width");
      path.intensity = detail::number_or(l, where, "intensity", 1.0);
      s.lines.push_back(std::move(path));
    }
  }

  if (root.contains("barrels")) {
    const json& barrels = detail::array_at(root, "barrels");
    for (std::size_t i = 0; i < barrels.size(); ++i) {
      const std::string where = "barrels[" + std::to_string(i) + "]";
      const json& b = barrels[i];
      detail::reject_unknown_keys(b, where, {"x", "y", "radius", "height"});
      s.barrels.push_back({{detail::number_at(b, where, "x"), detail::number_at(b, where, "y")},
                           detail::number_at(b, where, "radius"),
                           detail::number_at(b, where, "height")});
    }
  }

  if (root.contains("boxes")) {
    const json& boxes = detail::array_at(root, "boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string where = "boxes[" + std::to_string(i) + "]";
      const json& b = boxes[i];
      detail::reject_unknown_keys(b, where, {"x", "y", "hx", "hy", "yaw_deg", "height"});
      BoxObstacle box;
      box.center = {detail::number_at(b, where, "x"), detail::number_at(b, where, "y")};
      box.half_extents = {detail::number_at(b, where, "hx"), detail::number_at(b, where, "hy")};
      box.yaw = deg_to_rad(detail::number_or(b, where, "yaw_deg", 0.0));
      box.height = detail::number_at(b, where, "height");
      s.boxes.push_back(box);
    }
  }

  if (root.contains("goal")) {
    const json& g = root.at("goal");
    detail::reject_unknown_keys(g, "goal", {"x", "y", "radius"});
    s.goal = GoalRegion{{detail::number_at(g, "goal", "x"), detail::number_at(g, "goal", "y")},
                        detail::number_at(g, "goal", "radius")};
  }
  return s;
}

inline std::string serialize_scene(const Scene& s) {
  using detail::json;
  json root;
  root["geo"] = {{"lat0", s.geo.lat0}, {"lon0", s.geo.lon0}};
  root["spawn"] = {{"x", s.spawn.x}, {"y", s.spawn.y}, {"heading_deg", rad_to_deg(s.spawn.heading)}};
  root["terrain"] = {{"grass_base", {s.terrain.grass_base.r, s.terrain.grass_base.g, s.terrain.grass_base.b}},
                     {"noise_amplitude", s.terrain.noise_amplitude},
                     {"noise_scale", s.terrain.noise_scale},
                     {"noise_seed", s.terrain.noise_seed}};
  root["lines"] = json::array();
  for (const LinePath& l : s.lines) {
    json pts = json::array();
    for (const Vec2& p : l.points) pts.push_back({p.x, p.y});
    root["lines"].push_back({{"points", pts}, {"width", l.width}, {"intensity", l.intensity}});
  }
  root["barrels"] = json::array();
  for (const Barrel& b : s.barrels) {
    root["barrels"].push_back({{"x", b.center.x}, {"y", b.center.y}, {"radius", b.radius}, {"height", b.height}});
  }
  root["boxes"] = json::array();
  for (const BoxObstacle& b : s.boxes) {
    root["boxes"].push_back({{"x", b.center.x},
                             {"y", b.center.y},
                             {"hx", b.half_extents.x},
                             {"hy", b.half_extents.y},
                             {"yaw_deg", rad_to_deg(b.yaw)},
                             {"height", b.height}});
  }
  if (s.goal) root["goal"] = {{"x", s.goal->center.x}, {"y", s.goal->center.y}, {"radius", s.goal->radius}};
  return root.dump(2) + "\n";
}

inline Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError("cannot open scene file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

}  // namespace igvsim
