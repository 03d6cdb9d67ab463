// SPDX-License-Identifier: Apache-2.0
#include "igvsim/geometry.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace igvsim;

namespace {

Ray2 ray2(Vec2 o, double angle) { return {o, heading_vector(angle)}; }

Ray3 ray3(Vec3 o, Vec3 d) { return {o, (1.0 / norm(d)) * d}; }

}  // namespace

TEST(RayCircle, CollinearHit) {
  auto t = ray_circle_2d({{0, 0}, {1, 0}}, {5, 0}, 1.0);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 4.0);
}

TEST(RayCircle, Miss) { EXPECT_FALSE(ray_circle_2d({{0, 0}, {1, 0}}, {0, 3}, 1.0)); }

TEST(RayCircle, InsideReturnsExit) {
  auto t = ray_circle_2d({{5, 0}, {1, 0}}, {5, 0}, 1.0);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 1.0);
}

TEST(RayCircle, BehindIsMiss) { EXPECT_FALSE(ray_circle_2d({{0, 0}, {-1, 0}}, {5, 0}, 1.0)); }

TEST(RayCircle, TangentIsMiss) { EXPECT_FALSE(ray_circle_2d({{0, 1}, {1, 0}}, {5, 0}, 1.0)); }

TEST(RayCircle, MatchesMarchingOracle) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-6, 6), ang(-kPi, kPi), rad(0.05, 1.5);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 o{pos(rng), pos(rng)};
    const Vec2 c{pos(rng), pos(rng)};
    const double radius = rad(rng);
    const Ray2 r = ray2(o, std::atan2(c.y - o.y, c.x - o.x) + 0.5 * ang(rng));
    const auto fast = ray_circle_2d(r, c, radius);
    const auto slow = oracle::march_circle(r, c, radius, 20.0);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "case " << i;
    if (fast) {
      ++hits;
      EXPECT_NEAR(*fast, *slow, 2e-3) << "case " << i;
    }
  }
  EXPECT_GT(hits, 100);
}

TEST(RayBox, AxisAligned) {
  auto t = ray_box_2d({{0, 0}, {1, 0}}, {4, 0}, {1, 1}, 0.0);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 3.0);
}

TEST(RayBox, RotatedCorner) {
  auto t = ray_box_2d({{0, 0}, {1, 0}}, {4, 0}, {1, 1}, deg_to_rad(45));
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 4.0 - std::sqrt(2.0), 1e-12);
  auto slow = oracle::march_box({{0, 0}, {1, 0}}, {4, 0}, {1, 1}, deg_to_rad(45), 10.0);
  ASSERT_TRUE(slow);
  EXPECT_NEAR(*t, *slow, 2e-3);
}

TEST(RayBox, ParallelOutsideSlabMisses) { EXPECT_FALSE(ray_box_2d({{0, 2}, {1, 0}}, {4, 0}, {1, 1}, 0.0)); }

TEST(RayBox, InsideReturnsExit) {
  auto t = ray_box_2d({{4, 0}, {1, 0}}, {4, 0}, {1, 1}, 0.0);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 1.0);
}

TEST(RayBox, MatchesMarchingOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(-6, 6), ang(-kPi, kPi), half(0.1, 1.5);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 o{pos(rng), pos(rng)};
    const Vec2 c{pos(rng), pos(rng)};
    const Ray2 r = ray2(o, std::atan2(c.y - o.y, c.x - o.x) + 0.5 * ang(rng));
    const Vec2 h{half(rng), half(rng)};
    const double yaw = ang(rng);
    const auto fast = ray_box_2d(r, c, h, yaw);
    const auto slow = oracle::march_box(r, c, h, yaw, 20.0);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "case " << i;
    if (fast) {
      ++hits;
      EXPECT_NEAR(*fast, *slow, 2e-3) << "case " << i;
    }
  }
  EXPECT_GT(hits, 100);
}

TEST(RayGround, StraightDown) {
  auto p = ray_ground(ray3({0, 0, 1}, {0, 0, -1}));
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (Vec3{0, 0, 0}));
}

TEST(RayGround, HorizonMisses) { EXPECT_FALSE(ray_ground(ray3({0, 0, 1}, {1, 0, 0}))); }

TEST(RayGround, UpwardMissesAndBelowGroundMisses) {
  EXPECT_FALSE(ray_ground(ray3({0, 0, 1}, {1, 0, 0.1})));
  EXPECT_FALSE(ray_ground(ray3({0, 0, -1}, {0, 0, -1})));
}

TEST(RayGround, FortyFiveDegrees) {
  const double c = std::cos(deg_to_rad(45));
  auto p = ray_ground({{0, 0, 1}, {c, 0, -c}});
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->x, 1.0, 1e-12);
  EXPECT_NEAR(p->y, 0.0, 1e-12);
  EXPECT_EQ(p->z, 0.0);
}

TEST(RayCylinder, HorizontalThroughCenter) {
  auto t = ray_cylinder(ray3({0, 0, 0.5}, {1, 0, 0}), {3, 0}, 0.28, 1.0);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 2.72, 1e-12);
}

TEST(RayCylinder, AboveTopMisses) { EXPECT_FALSE(ray_cylinder(ray3({0, 0, 1.5}, {1, 0, 0}), {3, 0}, 0.28, 1.0)); }

TEST(RayCylinder, TopCapFromAbove) {
  auto t = ray_cylinder(ray3({3, 0, 2}, {0, 0, -1}), {3, 0}, 0.28, 1.0);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 1.0, 1e-12);
}

TEST(RayCylinder, MatchesMarchingOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(-4, 4), z(0.0, 2.5), d(-1, 1), rad(0.1, 1.0), h(0.3, 2.0);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 c{pos(rng), pos(rng)};
    const double radius = rad(rng), height = h(rng);
    // Aim roughly at the barrel so a good share of rays hit.
    const Vec3 o{pos(rng), pos(rng), z(rng)};
    const Vec3 target{c.x + d(rng), c.y + d(rng), z(rng) * 0.8};
    const Ray3 r = ray3(o, target - o);
    const auto fast = ray_cylinder(r, c, radius, height);
    const auto slow = oracle::march_cylinder(r, c, radius, height, 15.0);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "case " << i;
    if (fast) {
      ++hits;
      EXPECT_NEAR(*fast, *slow, 2e-3) << "case " << i;
    }
  }
  EXPECT_GT(hits, 200);
}

TEST(RayPrism, FrontFace) {
  auto t = ray_prism(ray3({0, 0, 0.5}, {1, 0, 0}), {4, 0}, {1, 1}, 0.0, 1.0);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 3.0, 1e-12);
  EXPECT_FALSE(ray_prism(ray3({0, 0, 1.5}, {1, 0, 0}), {4, 0}, {1, 1}, 0.0, 1.0));
}

TEST(BandDistance, VertexInteriorAndCap) {
  const std::vector<Vec2> pts{{0, 0}, {2, 0}, {2, 2}};
  EXPECT_EQ(polyline_distance({2, 0}, pts), 0.0);
  EXPECT_NEAR(polyline_distance({1, 0.3}, pts), 0.3, 1e-15);
  EXPECT_NEAR(polyline_distance({-3, 4}, pts), 5.0, 1e-15);
}

TEST(GeometryProperties, ResubstitutionSatisfiesImplicitEquation) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(-50, 50), ang(-kPi, kPi), rad(0.05, 3);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const Ray2 r = ray2({pos(rng), pos(rng)}, ang(rng));
    const Vec2 c{r.origin.x + pos(rng) / 5, r.origin.y + pos(rng) / 5};
    const double radius = rad(rng);
    if (auto t = ray_circle_2d(r, c, radius)) {
      EXPECT_NEAR(norm(r.origin + *t * r.dir - c), radius, 1e-6);
      ++checked;
    }
    const Vec2 h{rad(rng), rad(rng)};
    const double yaw = ang(rng);
    if (auto t = ray_box_2d(r, c, h, yaw)) {
      EXPECT_NEAR(box_signed_distance(r.origin + *t * r.dir, c, h, yaw), 0.0, 1e-6);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(GeometryProperties, TranslationEquivariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-10, 10), ang(-kPi, kPi), rad(0.1, 2), shift(-100, 100);
  for (int i = 0; i < 2000; ++i) {
    const Ray2 r = ray2({pos(rng), pos(rng)}, ang(rng));
    const Vec2 c{pos(rng), pos(rng)};
    const double radius = rad(rng);
    const Vec2 s{shift(rng), shift(rng)};
    const auto a = ray_circle_2d(r, c, radius);
    const auto b = ray_circle_2d({r.origin + s, r.dir}, c + s, radius);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_NEAR(*a, *b, 1e-9);
    }
    const Vec2 h{rad(rng), rad(rng)};
    const double yaw = ang(rng);
    const auto p = ray_box_2d(r, c, h, yaw);
    const auto q = ray_box_2d({r.origin + s, r.dir}, c + s, h, yaw);
    ASSERT_EQ(p.has_value(), q.has_value());
    if (p) {
      EXPECT_NEAR(*p, *q, 1e-9);
    }
  }
}
