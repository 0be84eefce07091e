// Copyright 2026 The rotiou Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rotiou/overlap.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotiou/oracle.hpp"

namespace rotiou {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

RBox2 rbox_of(const AABox2& b) {
  return {0.5 * (b.x_min() + b.x_max()), 0.5 * (b.y_min() + b.y_max()), b.width(), b.height(), 0.0};
}

TEST(AaIouTest, Examples) {
  EXPECT_DOUBLE_EQ(aa_iou({0, 0, 2, 2}, {0, 0, 2, 2}).iou, 1.0);
  EXPECT_DOUBLE_EQ(aa_iou({0, 0, 1, 1}, {5, 5, 6, 6}).iou, 0.0);

  const OverlapResult r = aa_iou({0, 0, 2, 2}, {1, 1, 3, 3});
  EXPECT_DOUBLE_EQ(r.intersection_area, 1.0);
  EXPECT_DOUBLE_EQ(r.union_area, 7.0);
  EXPECT_DOUBLE_EQ(r.iou, 1.0 / 7.0);

  const auto mc = oracle::mc_iou(rbox_of({0, 0, 2, 2}), rbox_of({1, 1, 3, 3}), 200000, 3);
  EXPECT_LE(std::abs(mc.estimate - 1.0 / 7.0), 4 * mc.std_error);
}

TEST(SegmentIntersectionTest, Examples) {
  const auto x = segment_intersection({0, 0}, {2, 2}, {0, 2}, {2, 0});
  ASSERT_TRUE(x.has_value());
  EXPECT_DOUBLE_EQ(x->x, 1.0);
  EXPECT_DOUBLE_EQ(x->y, 1.0);

  EXPECT_FALSE(segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}).has_value());

  const auto y = segment_intersection({0, 0}, {4, 0}, {1, -1}, {1, 3});
  ASSERT_TRUE(y.has_value());
  EXPECT_DOUBLE_EQ(y->x, 1.0);
  EXPECT_DOUBLE_EQ(y->y, 0.0);
}

TEST(SegmentIntersectionTest, MissesOutsideParameterRange) {
  EXPECT_FALSE(segment_intersection({0, 0}, {1, 0}, {2, -1}, {2, 1}).has_value());
  EXPECT_FALSE(segment_intersection({0, 0}, {1, 0}, {0.5, 0.1}, {0.5, 2}).has_value());
  // Collinear overlap is reported as parallel.
  EXPECT_FALSE(segment_intersection({0, 0}, {2, 0}, {1, 0}, {3, 0}).has_value());
}

TEST(PointInRBoxTest, Examples) {
  for (double yaw : {0.0, 0.3, 1.0, -2.0}) {
    EXPECT_TRUE(point_in_rbox({0, 0}, RBox2(0, 0, 2, 2, yaw)));
  }
  EXPECT_FALSE(point_in_rbox({10, 10}, RBox2(0, 0, 2, 2, 0)));
  EXPECT_TRUE(point_in_rbox({0.9, 0.0}, RBox2(0, 0, 2, 2, kPi / 4)));
  // Boundary is inside; just beyond the slack is outside.
  EXPECT_TRUE(point_in_rbox({1.0, 0.5}, RBox2(0, 0, 2, 2, 0)));
  EXPECT_FALSE(point_in_rbox({1.0 + 1e-6, 0.5}, RBox2(0, 0, 2, 2, 0)));
}

TEST(IntersectionPolygonTest, IdenticalSquares) {
  const RBox2 b(0, 0, 2, 2, 0);
  const auto poly = intersection_polygon(b, b);
  ASSERT_TRUE(poly.has_value());
  ASSERT_EQ(poly->vertices.size(), 4u);
  EXPECT_TRUE(is_convex_ccw(*poly));
  EXPECT_NEAR(shoelace_area(*poly), 4.0, 1e-12);
}

TEST(IntersectionPolygonTest, DisjointIsEmpty) {
  EXPECT_FALSE(intersection_polygon(RBox2(0, 0, 1, 1, 0), RBox2(5, 5, 1, 1, 0.3)).has_value());
}

TEST(IntersectionPolygonTest, TouchingEdgeIsEmpty) {
  EXPECT_FALSE(intersection_polygon(RBox2(0.5, 0.5, 1, 1, 0), RBox2(1.5, 0.5, 1, 1, 0)).has_value());
}

TEST(IntersectionPolygonTest, CrossedSquaresGiveRegularOctagon) {
  const auto traced = intersection_polygon_traced(RBox2(0, 0, 2, 2, 0), RBox2(0, 0, 2, 2, kPi / 4));
  ASSERT_TRUE(traced.has_value());
  const auto& v = traced->polygon.vertices;
  ASSERT_EQ(v.size(), 8u);
  EXPECT_TRUE(is_convex_ccw(traced->polygon));
  for (const auto& s : traced->sources) {
    EXPECT_EQ(s.kind, VertexSource::Kind::EdgeCrossing);
  }
  const double a = kSqrt2 - 1.0;
  const std::vector<Vec2> want{{1, a}, {1, -a}, {-1, a}, {-1, -a}, {a, 1}, {-a, 1}, {a, -1}, {-a, -1}};
  for (const Vec2& w : want) {
    const bool found = std::any_of(v.begin(), v.end(), [&](Vec2 p) { return norm(p - w) < 1e-12; });
    EXPECT_TRUE(found) << w.x << "," << w.y;
  }
}

TEST(IntersectionPolygonTest, NestedBoxReturnsInnerCorners) {
  const auto traced = intersection_polygon_traced(RBox2(0, 0, 10, 10, 0.2), RBox2(0.5, -0.5, 2, 1, 1.1));
  ASSERT_TRUE(traced.has_value());
  ASSERT_EQ(traced->sources.size(), 4u);
  for (const auto& s : traced->sources) {
    EXPECT_EQ(s, VertexSource::corner(1, s.b));
  }
}

TEST(RotatedIouTest, Examples) {
  const RBox2 b(1.5, -2, 3, 1, 0.4);
  EXPECT_NEAR(rotated_iou(b, b).iou, 1.0, 1e-12);

  const OverlapResult crossed = rotated_iou(RBox2(0, 0, 2, 2, 0), RBox2(0, 0, 2, 2, kPi / 4));
  EXPECT_NEAR(crossed.iou, 1.0 / kSqrt2, 1e-9);
  EXPECT_NEAR(crossed.iou, (kSqrt2 - 1) / (2 - kSqrt2), 1e-12);
  EXPECT_NEAR(crossed.intersection_area, 8 * (kSqrt2 - 1), 1e-12);
  EXPECT_EQ(crossed.vertex_provenance.size(), 8u);

  EXPECT_NEAR(rotated_iou(RBox2(0, 0, 2, 4, 0), RBox2(0, 0, 2, 4, kPi)).iou, 1.0, 1e-12);
}

TEST(RotatedIouTest, CrossedSquaresAgreeWithMonteCarlo) {
  const auto mc = oracle::mc_iou(RBox2(0, 0, 2, 2, 0), RBox2(0, 0, 2, 2, kPi / 4), 1000000, 42);
  EXPECT_LE(std::abs(mc.estimate - 1.0 / kSqrt2), 4 * mc.std_error);
}

TEST(Iou3dTest, Examples) {
  const Box3 cube(0, 0, 0, 1, 1, 1, 0);
  EXPECT_NEAR(iou_3d(cube, cube).iou, 1.0, 1e-12);

  const OverlapResult stacked = iou_3d(cube, Box3(0, 0, 0.5, 1, 1, 1, 0));
  EXPECT_NEAR(stacked.iou, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(stacked.intersection_area, 0.5, 1e-12);
  EXPECT_NEAR(stacked.union_area, 1.5, 1e-12);

  EXPECT_EQ(iou_3d(cube, Box3(5, 0, 0, 1, 1, 100, 0)).iou, 0.0);
  EXPECT_EQ(iou_3d(cube, Box3(0, 0, 3, 1, 1, 1, 0)).iou, 0.0);
}

TEST(EnclosingAabbTest, Examples) {
  const AABox2 same = enclosing_aabb(RBox2(0, 0, 2, 2, 0), RBox2(0, 0, 2, 2, 0));
  EXPECT_DOUBLE_EQ(same.x_min(), -1);
  EXPECT_DOUBLE_EQ(same.x_max(), 1);
  EXPECT_DOUBLE_EQ(same.y_min(), -1);
  EXPECT_DOUBLE_EQ(same.y_max(), 1);

  const AABox2 pair = enclosing_aabb(RBox2(0, 0, 2, 2, 0), RBox2(3, 0, 2, 2, 0));
  EXPECT_DOUBLE_EQ(pair.x_min(), -1);
  EXPECT_DOUBLE_EQ(pair.x_max(), 4);
  EXPECT_DOUBLE_EQ(pair.y_min(), -1);
  EXPECT_DOUBLE_EQ(pair.y_max(), 1);

  const RBox2 diamond(0, 0, 2, 2, kPi / 4);
  const AABox2 rot = enclosing_aabb(diamond, diamond);
  EXPECT_NEAR(rot.x_min(), -kSqrt2, 1e-12);
  EXPECT_NEAR(rot.x_max(), kSqrt2, 1e-12);
  EXPECT_NEAR(rot.y_min(), -kSqrt2, 1e-12);
  EXPECT_NEAR(rot.y_max(), kSqrt2, 1e-12);
}

TEST(GiouTest, Examples) {
  const RBox2 a(0.5, 0.5, 1, 1, 0);
  EXPECT_NEAR(giou(a, a), 1.0, 1e-12);
  EXPECT_NEAR(giou(a, RBox2(2.5, 0.5, 1, 1, 0)), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(giou(a, RBox2(1.5, 0.5, 1, 1, 0)), 0.0, 1e-12);
}

TEST(GiouTest, ThreeDimensional) {
  const Box3 cube(0, 0, 0, 1, 1, 1, 0);
  EXPECT_NEAR(giou_3d(cube, cube), 1.0, 1e-12);
  // Stacked at offset 0.5: enclosure volume 1.5 equals the union.
  EXPECT_NEAR(giou_3d(cube, Box3(0, 0, 0.5, 1, 1, 1, 0)), 1.0 / 3.0, 1e-12);
  // Gap of 1 along x: C = 3, U = 2.
  EXPECT_NEAR(giou_3d(cube, Box3(2, 0, 0, 1, 1, 1, 0)), -1.0 / 3.0, 1e-12);
}

TEST(EnclosingHullTest, CrossedSquaresGiveOctagon) {
  const RBox2 square(0, 0, 2, 2, 0);
  const RBox2 diamond(0, 0, 2, 2, kPi / 4);
  const TracedHull hull = enclosing_hull_traced(square, diamond);
  ASSERT_EQ(hull.polygon.vertices.size(), 8u);
  EXPECT_TRUE(is_convex_ccw(hull.polygon, kGeomEps));
  // Regular octagon with circumradius sqrt(2).
  EXPECT_NEAR(enclosure_area(square, diamond, Enclosure::ConvexHull), 4 * kSqrt2, 1e-12);
  EXPECT_NEAR(enclosure_area(square, diamond, Enclosure::AxisAligned), 8.0, 1e-12);
}

TEST(EnclosingHullTest, DropsInteriorCorners) {
  const TracedHull hull = enclosing_hull_traced(RBox2(0, 0, 4, 4, 0), RBox2(0.5, 0, 1, 1, 0.2));
  ASSERT_EQ(hull.polygon.vertices.size(), 4u);
  for (int id : hull.corner_ids) EXPECT_LT(id, 4);
  EXPECT_NEAR(shoelace_area(hull.polygon), 16.0, 1e-12);
}

TEST(GiouTest, IdenticalRotatedBoxesScoreOne) {
  const RBox2 b(1, -2, 1, 2, 0.3);
  EXPECT_NEAR(giou(b, b), 1.0, 1e-12);
  // The axis-aligned enclosure over-covers a rotated box.
  EXPECT_LT(giou(b, b, Enclosure::AxisAligned), 0.99);
  const Box3 c(1, -2, 0.5, 1, 2, 1.5, 0.3);
  EXPECT_NEAR(giou_3d(c, c), 1.0, 1e-12);
}

TEST(GiouTest, CrossedSquaresUseHull) {
  const RBox2 square(0, 0, 2, 2, 0);
  const RBox2 diamond(0, 0, 2, 2, kPi / 4);
  const double inter = 8 * (kSqrt2 - 1);
  const double uni = 8 - inter;
  const double hull = 4 * kSqrt2;
  EXPECT_NEAR(giou(square, diamond), inter / uni - (hull - uni) / hull, 1e-12);
}

// --- properties over randomized pairs -------------------------------------

class OverlapProperty : public ::testing::Test {
 protected:
  static constexpr int kPairs = 3000;
  oracle::PairGenSpec spec_;
};

TEST_F(OverlapProperty, MetricAxioms) {
  for (int i = 0; i < kPairs; ++i) {
    const auto p = oracle::random_pair(spec_, 1000 + i);
    const OverlapResult gd = rotated_iou(p.g, p.d);
    const OverlapResult dg = rotated_iou(p.d, p.g);
    EXPECT_NEAR(gd.iou, dg.iou, 1e-12);
    EXPECT_GE(gd.iou, 0.0);
    EXPECT_LE(gd.iou, 1.0);
    EXPECT_NEAR(gd.iou, gd.intersection_area / gd.union_area, 1e-15);
    EXPECT_NEAR(gd.union_area, p.g.area() + p.d.area() - gd.intersection_area, 1e-12 * gd.union_area);
    EXPECT_LE(gd.intersection_area, std::min(p.g.area(), p.d.area()) * (1 + 1e-12));

    const double gi = giou(p.g, p.d);
    EXPECT_GT(gi, -1.0);
    EXPECT_LE(gi, gd.iou + 1e-15);
  }
}

TEST_F(OverlapProperty, ScaleAndRigidInvariance) {
  for (int i = 0; i < kPairs; ++i) {
    const auto p = oracle::random_pair(spec_, 5000 + i);
    const double base = rotated_iou(p.g, p.d).iou;

    const double s = std::pow(10.0, -2.0 + 4.0 * (i % 97) / 96.0);
    auto scaled = [s](const RBox2& b) { return RBox2(s * b.cx(), s * b.cy(), s * b.w(), s * b.l(), b.yaw()); };
    EXPECT_NEAR(rotated_iou(scaled(p.g), scaled(p.d)).iou, base, 1e-9 * std::max(base, 1.0));

    const double phi = 0.37 * i;
    const Vec2 t{3.0 - 0.01 * i, -7.0 + 0.02 * i};
    auto moved = [&](const RBox2& b) {
      const double c = std::cos(phi), sn = std::sin(phi);
      return RBox2(c * b.cx() - sn * b.cy() + t.x, sn * b.cx() + c * b.cy() + t.y, b.w(), b.l(), b.yaw() + phi);
    };
    EXPECT_NEAR(rotated_iou(moved(p.g), moved(p.d)).iou, base, 1e-9);
  }
}

TEST_F(OverlapProperty, ReducesToAxisAlignedCase) {
  for (int i = 0; i < kPairs; ++i) {
    auto p = oracle::random_pair(spec_, 9000 + i);
    const RBox2 g(p.g.cx(), p.g.cy(), p.g.w(), p.g.l(), 0.0);
    const RBox2 d(p.d.cx(), p.d.cy(), p.d.w(), p.d.l(), 0.0);
    auto aabb = [](const RBox2& b) {
      return AABox2(b.cx() - 0.5 * b.w(), b.cy() - 0.5 * b.l(), b.cx() + 0.5 * b.w(), b.cy() + 0.5 * b.l());
    };
    EXPECT_NEAR(rotated_iou(g, d).iou, aa_iou(aabb(g), aabb(d)).iou, 1e-12);
  }
}

TEST_F(OverlapProperty, HullIsTightestEnclosure) {
  for (int i = 0; i < kPairs; ++i) {
    const auto p = oracle::random_pair(spec_, 40000 + i);
    const TracedHull hull = enclosing_hull_traced(p.g, p.d);
    EXPECT_TRUE(is_convex_ccw(hull.polygon, kGeomEps));
    const double c_hull = enclosure_area(p.g, p.d, Enclosure::ConvexHull);
    const double c_box = enclosure_area(p.g, p.d, Enclosure::AxisAligned);
    const double u = rotated_iou(p.g, p.d).union_area;
    EXPECT_LE(c_hull, c_box * (1 + 1e-12));
    EXPECT_GE(c_hull, u * (1 - 1e-12));
    EXPECT_GE(giou(p.g, p.d), giou(p.g, p.d, Enclosure::AxisAligned) - 1e-12);
  }
}

TEST_F(OverlapProperty, AgreesWithClippingOracle) {
  for (int i = 0; i < kPairs; ++i) {
    const auto p = oracle::random_pair(spec_, 20000 + i);
    EXPECT_NEAR(rotated_iou(p.g, p.d).iou, oracle::clip_iou(p.g, p.d), 1e-9)
        << "regime " << oracle::to_string(p.regime) << " seed " << 20000 + i;
  }
}

TEST_F(OverlapProperty, IntersectionPolygonIsConvex) {
  for (int i = 0; i < kPairs; ++i) {
    const auto p = oracle::random_pair(spec_, 30000 + i);
    if (const auto poly = intersection_polygon(p.g, p.d)) {
      EXPECT_LE(poly->vertices.size(), 8u);
      EXPECT_TRUE(is_convex_ccw(*poly));
    }
  }
}

}  // namespace
}  // namespace rotiou
