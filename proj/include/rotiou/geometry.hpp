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

#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

namespace rotiou {

// Absolute tolerance on cross products, containment slack and areas.
inline constexpr double kGeomEps = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// Axis-aligned rectangle. Throws std::invalid_argument unless
/// x_min <= x_max and y_min <= y_max with all bounds finite.
class AABox2 {
 public:
  AABox2(double x_min, double y_min, double x_max, double y_max);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double area() const { return width() * height(); }

 private:
  double x_min_, y_min_, x_max_, y_max_;
};

/// Rotated rectangle: center, extent w along the local x axis, extent l
/// along the local y axis, and a counterclockwise yaw in radians.
///
/// Construction rejects non-finite values and non-positive extents and
/// stores the yaw normalized to (-pi, pi].
class RBox2 {
 public:
  static constexpr std::size_t kNumParams = 5;
  using Params = std::array<double, kNumParams>;  // cx, cy, w, l, yaw

  RBox2(double cx, double cy, double w, double l, double yaw);
  explicit RBox2(const Params& p) : RBox2(p[0], p[1], p[2], p[3], p[4]) {}

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double w() const { return w_; }
  double l() const { return l_; }
  double yaw() const { return yaw_; }
  Vec2 center() const { return {cx_, cy_}; }
  double area() const { return w_ * l_; }
  Params params() const { return {cx_, cy_, w_, l_, yaw_}; }

  RBox2 translated(Vec2 t) const { return {cx_ + t.x, cy_ + t.y, w_, l_, yaw_}; }

 private:
  double cx_, cy_, w_, l_, yaw_;
};

/// Cuboid with a single rotation about the vertical axis.
class Box3 {
 public:
  static constexpr std::size_t kNumParams = 7;
  using Params = std::array<double, kNumParams>;  // cx, cy, cz, w, l, h, yaw

  Box3(double cx, double cy, double cz, double w, double l, double h, double yaw);
  explicit Box3(const Params& p) : Box3(p[0], p[1], p[2], p[3], p[4], p[5], p[6]) {}

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double cz() const { return cz_; }
  double w() const { return w_; }
  double l() const { return l_; }
  double h() const { return h_; }
  double yaw() const { return yaw_; }
  double top() const { return cz_ + 0.5 * h_; }
  double bottom() const { return cz_ - 0.5 * h_; }
  double volume() const { return w_ * l_ * h_; }
  Params params() const { return {cx_, cy_, cz_, w_, l_, h_, yaw_}; }

  /// Footprint on the ground plane.
  RBox2 bev() const { return {cx_, cy_, w_, l_, yaw_}; }

 private:
  double cx_, cy_, cz_, w_, l_, h_, yaw_;
};

/// Ordered (counterclockwise) vertex list of a convex region.
struct ConvexPoly {
  std::vector<Vec2> vertices;
};

/// Corners in counterclockwise order. Corner 0 is the local (+w/2, +l/2)
/// corner, followed by (-w/2, +l/2), (-w/2, -l/2), (+w/2, -l/2).
std::array<Vec2, 4> corners(const RBox2& box);

/// Maps theta onto (-pi, pi]. Throws std::invalid_argument on NaN or inf.
double normalize_angle(double theta);

/// Area of a polygon as a triangle fan about vertex 0, made nonnegative.
/// Throws std::domain_error for fewer than 3 vertices.
double shoelace_area(const ConvexPoly& poly);

/// True when every turn is left within `eps`, i.e. the vertex order is
/// counterclockwise and convex.
bool is_convex_ccw(const ConvexPoly& poly, double eps = kGeomEps);

}  // namespace rotiou
