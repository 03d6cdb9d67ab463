// SPDX-License-Identifier: Apache-2.0
#include "igvsim/scene.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace igvsim;

namespace {

const std::string kMinimal = R"({"geo": {"lat0": 42.0, "lon0": -83.0}, "spawn": {"x": 0, "y": 0}})";

std::string error_of(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const SceneError& e) {
    return e.what();
  }
  return {};
}

Scene random_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-50, 50), pos_small(0.05, 3), unit(0, 1), ang(-kPi, kPi);
  Scene s;
  s.geo = {std::uniform_real_distribution<double>(-80, 80)(rng), std::uniform_real_distribution<double>(-179, 179)(rng)};
  s.terrain.grass_base = {static_cast<std::uint8_t>(rng() % 256), static_cast<std::uint8_t>(rng() % 256),
                          static_cast<std::uint8_t>(rng() % 256)};
  s.terrain.noise_amplitude = unit(rng);
  s.terrain.noise_scale = pos_small(rng);
  s.terrain.noise_seed = static_cast<std::int64_t>(rng() % 100000) - 50000;
  for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) {
    LinePath l;
    for (int k = 0, m = 2 + static_cast<int>(rng() % 5); k < m; ++k) l.points.push_back({pos(rng), pos(rng)});
    l.width = pos_small(rng) / 10;
    l.intensity = unit(rng);
    s.lines.push_back(l);
  }
  for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) {
    s.barrels.push_back({{pos(rng), pos(rng)}, pos_small(rng) / 3, pos_small(rng)});
  }
  for (int i = 0, n = static_cast<int>(rng() % 3); i < n; ++i) {
    s.boxes.push_back({{pos(rng), pos(rng)}, {pos_small(rng), pos_small(rng)}, ang(rng), pos_small(rng)});
  }
  s.spawn = {200.0 + pos(rng), 200.0, ang(rng)};
  if (rng() % 2) s.goal = GoalRegion{{pos(rng), pos(rng)}, pos_small(rng)};
  return s;
}

}  // namespace

TEST(ParseScene, MinimalUsesDefaults) {
  const Scene s = parse_scene(kMinimal);
  EXPECT_TRUE(s.barrels.empty());
  EXPECT_TRUE(s.lines.empty());
  EXPECT_TRUE(s.boxes.empty());
  EXPECT_EQ(s.terrain, TerrainStyle{});
  EXPECT_FALSE(s.goal);
  EXPECT_EQ(s.geo.lat0, 42.0);
  EXPECT_TRUE(validate_scene(s).empty());
}

TEST(ParseScene, UnknownKeyIsNamed) {
  const std::string e = error_of(R"({"geo": {"lat0": 0, "lon0": 0}, "spawn": {"x": 0, "y": 0}, "barrles": []})");
  EXPECT_NE(e.find("barrles"), std::string::npos) << e;
}

TEST(ParseScene, NestedUnknownKeyCarriesPath) {
  const std::string e = error_of(
      R"({"geo": {"lat0": 0, "lon0": 0}, "spawn": {"x": 0, "y": 0}, "barrels": [{"x": 1, "y": 1, "radius": 0.3, "height": 1, "colour": 1}]})");
  EXPECT_NE(e.find("barrels[0]"), std::string::npos) << e;
  EXPECT_NE(e.find("colour"), std::string::npos) << e;
}

TEST(ParseScene, MissingRequiredSections) {
  EXPECT_NE(error_of(R"({"spawn": {"x": 0, "y": 0}})").find("geo"), std::string::npos);
  EXPECT_NE(error_of(R"({"geo": {"lat0": 0, "lon0": 0}})").find("spawn"), std::string::npos);
}

TEST(ParseScene, SyntaxErrorReportsLineAndColumn) {
  const std::string e = error_of("{\n  \"geo\": {\"lat0\": 1,,\n}");
  EXPECT_NE(e.find("line 2"), std::string::npos) << e;
  EXPECT_NE(e.find("column"), std::string::npos) << e;
}

TEST(ParseScene, AnglesAreDegreesInFiles) {
  const Scene s = parse_scene(R"({"geo": {"lat0": 0, "lon0": 0}, "spawn": {"x": 0, "y": 0, "heading_deg": 90},
    "boxes": [{"x": 5, "y": 0, "hx": 1, "hy": 1, "yaw_deg": 45, "height": 1}]})");
  EXPECT_NEAR(s.spawn.heading, kPi / 2, 1e-15);
  EXPECT_NEAR(s.boxes[0].yaw, kPi / 4, 1e-15);
}

TEST(ParseScene, SampleCourse) {
  const Scene s = load_scene_file(IGVSIM_SOURCE_DIR "/data/sample_course.json");
  EXPECT_EQ(s.barrels.size(), 12u);
  EXPECT_EQ(s.lines.size(), 2u);
  ASSERT_TRUE(s.goal);
  EXPECT_TRUE(validate_scene(s).empty());
}

TEST(ValidateScene, NegativeRadiusCitesIndex) {
  Scene s = parse_scene(kMinimal);
  s.barrels = {{{5, 5}, 0.3, 1}, {{9, 9}, -0.1, 1}};
  const auto v = validate_scene(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("barrels[1]"), std::string::npos);
}

TEST(ValidateScene, SpawnInsideBarrel) {
  Scene s = parse_scene(kMinimal);
  s.barrels = {{{0, 0}, 0.3, 1}};
  const auto v = validate_scene(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("spawn overlaps obstacle"), std::string::npos);
}

TEST(ValidateScene, DegenerateLineAndPole) {
  Scene s = parse_scene(kMinimal);
  s.geo.lat0 = 89.5;
  s.lines = {{{{0, 0}, {0, 0}}, 0.08, 1.0}};
  EXPECT_EQ(validate_scene(s).size(), 2u);
}

TEST(SceneProperties, SerializeParseRoundTrip) {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 300; ++i) {
    const Scene a = random_scene(rng);
    ASSERT_TRUE(validate_scene(a).empty());
    Scene b = parse_scene(serialize_scene(a));
    // Angles pass through degrees in the file.
    EXPECT_NEAR(b.spawn.heading, a.spawn.heading, 1e-12);
    b.spawn.heading = a.spawn.heading;
    ASSERT_EQ(a.boxes.size(), b.boxes.size());
    for (std::size_t k = 0; k < a.boxes.size(); ++k) {
      EXPECT_NEAR(b.boxes[k].yaw, a.boxes[k].yaw, 1e-12);
      b.boxes[k].yaw = a.boxes[k].yaw;
    }
    EXPECT_EQ(a, b) << "case " << i;
  }
}

TEST(GroundColor, CenterlineWithNoiseOff) {
  Scene s = parse_scene(kMinimal);
  s.terrain.noise_amplitude = 0.0;
  s.lines = {{{{0, 0}, {10, 0}}, 0.08, 1.0}};
  EXPECT_EQ(ground_color_at(s, {5, 0}), (Rgb8{235, 235, 225}));
  EXPECT_EQ(ground_color_at(s, {5, 10}), s.terrain.grass_base);
  s.lines[0].intensity = 0.5;
  EXPECT_EQ(ground_color_at(s, {5, 0}), (Rgb8{118, 118, 113}));
}

TEST(GroundColor, NoiseStaysInBand) {
  Scene s = parse_scene(kMinimal);
  s.terrain.noise_amplitude = 0.2;
  s.lines = {{{{0, 0}, {10, 0}}, 0.5, 1.0}};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> x(0, 10), y(-0.2, 0.2), far(5, 50);
  for (int i = 0; i < 2000; ++i) {
    const Rgb8 paint = ground_color_at(s, {x(rng), y(rng)});
    EXPECT_LE(std::abs(paint.r - 235), 8);
    EXPECT_LE(std::abs(paint.b - 225), 8);
    const Rgb8 grass = ground_color_at(s, {x(rng), far(rng)});
    EXPECT_LE(std::abs(grass.g - 128), static_cast<int>(std::ceil(128 * 0.2)));
  }
}

TEST(GroundColor, PureFunction) {
  Scene s = load_scene_file(IGVSIM_SOURCE_DIR "/data/sample_course.json");
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> x(-5, 45), y(-5, 5);
  std::vector<std::pair<Vec2, Rgb8>> first;
  for (int i = 0; i < 10000; ++i) {
    const Vec2 p{x(rng), y(rng)};
    first.emplace_back(p, ground_color_at(s, p));
  }
  for (const auto& [p, c] : first) ASSERT_EQ(ground_color_at(s, p), c);
}

TEST(GroundColor, MembershipMatchesBandDistance) {
  Scene s = load_scene_file(IGVSIM_SOURCE_DIR "/data/sample_course.json");
  s.terrain.noise_amplitude = 0.0;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> x(-3, 41), y(-4.5, 4.5);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{x(rng), y(rng)};
    bool inside = false;
    for (const auto& l : s.lines) inside = inside || point_band_distance(p, l) <= 0.5 * l.width;
    const bool white = ground_color_at(s, p) != s.terrain.grass_base;
    ASSERT_EQ(inside, white) << p.x << "," << p.y;
  }
  // Points placed on the band edges exercise the boundary.
  for (int i = 0; i < 1000; ++i) {
    const auto& l = s.lines[i % 2];
    const std::size_t k = rng() % (l.points.size() - 1);
    const Vec2 a = l.points[k], b = l.points[k + 1];
    const Vec2 d = (1.0 / norm(b - a)) * (b - a);
    const Vec2 p = a + std::uniform_real_distribution<double>(0, 1)(rng) * (b - a) +
                   std::uniform_real_distribution<double>(-0.06, 0.06)(rng) * Vec2{-d.y, d.x};
    bool inside = false;
    for (const auto& line : s.lines) inside = inside || point_band_distance(p, line) <= 0.5 * line.width;
    ASSERT_EQ(inside, ground_color_at(s, p) != s.terrain.grass_base);
  }
}

TEST(GroundShader, MatchesReferenceShading) {
  std::mt19937_64 rng(24);
  for (int c = 0; c < 20; ++c) {
    Scene s = random_scene(rng);
    if (c == 0) s = load_scene_file(IGVSIM_SOURCE_DIR "/data/sample_course.json");
    const GroundShader shader(s);
    std::uniform_real_distribution<double> coord(-80, 80);
    for (int i = 0; i < 5000; ++i) {
      Vec2 p{coord(rng), coord(rng)};
      if (i % 2 && !s.lines.empty()) {
        const auto& l = s.lines[rng() % s.lines.size()];
        const Vec2 a = l.points[rng() % l.points.size()];
        p = a + Vec2{coord(rng) / 400, coord(rng) / 400};
      }
      ASSERT_EQ(shader.color_at(p), ground_color_at(s, p)) << "scene " << c << " point " << p.x << "," << p.y;
    }
  }
}
