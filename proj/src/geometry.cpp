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

#include "rotiou/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotiou {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

void require_positive(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive, got " +
                                std::to_string(v));
  }
}

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

AABox2::AABox2(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  require_finite(x_min, "x_min");
  require_finite(y_min, "y_min");
  require_finite(x_max, "x_max");
  require_finite(y_max, "y_max");
  if (x_min > x_max || y_min > y_max) {
    throw std::invalid_argument("AABox2 requires min <= max on both axes");
  }
}

RBox2::RBox2(double cx, double cy, double w, double l, double yaw)
    : cx_(cx), cy_(cy), w_(w), l_(l), yaw_(0.0) {
  require_finite(cx, "cx");
  require_finite(cy, "cy");
  require_positive(w, "w");
  require_positive(l, "l");
  yaw_ = normalize_angle(yaw);
}

Box3::Box3(double cx, double cy, double cz, double w, double l, double h, double yaw)
    : cx_(cx), cy_(cy), cz_(cz), w_(w), l_(l), h_(h), yaw_(0.0) {
  require_finite(cx, "cx");
  require_finite(cy, "cy");
  require_finite(cz, "cz");
  require_positive(w, "w");
  require_positive(l, "l");
  require_positive(h, "h");
  yaw_ = normalize_angle(yaw);
}

std::array<Vec2, 4> corners(const RBox2& box) {
  const double c = std::cos(box.yaw());
  const double s = std::sin(box.yaw());
  const double hw = box.w() * 0.5;
  const double hl = box.l() * 0.5;
  constexpr std::array<std::array<double, 2>, 4> kSigns{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

  std::array<Vec2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const double u = kSigns[i][0] * hw;
    const double v = kSigns[i][1] * hl;
    out[i] = {box.cx() + (c * u - s * v), box.cy() + (s * u + c * v)};
  }
  return out;
}

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("angle must be finite");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (r <= -std::numbers::pi) {
    r += kTwoPi;
  }
  return r;
}

double shoelace_area(const ConvexPoly& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) {
    throw std::domain_error("shoelace_area needs at least 3 vertices, got " +
                            std::to_string(v.size()));
  }
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    twice += cross(v[i] - v[0], v[i + 1] - v[0]);
  }
  return std::abs(twice) * 0.5;
}

bool is_convex_ccw(const ConvexPoly& poly, double eps) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % n];
    const Vec2 c = v[(i + 2) % n];
    if (cross(b - a, c - b) < -eps) {
      return false;
    }
  }
  return true;
}

}  // namespace rotiou
