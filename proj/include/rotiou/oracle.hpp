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
#include <cstdint>
#include <numbers>

#include "rotiou/geometry.hpp"

// Ground-truth generators for testing the overlap code. Nothing in here
// calls into overlap.hpp: corners, containment and areas are recomputed
// independently so a defect in the production path cannot vouch for itself.
namespace rotiou::oracle {

struct McEstimate {
  double estimate = 0.0;   // IoU
  double std_error = 0.0;  // of `estimate`
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double intersection_area = 0.0;
  double intersection_area_std_error = 0.0;  // sqrt(p(1-p)/n) * window area
};

/// Monte-Carlo IoU from uniform samples over the joint bounding box.
/// Conditioned on landing in the union, the intersection count is binomial
/// with parameter IoU, which gives `std_error`. Throws
/// std::invalid_argument when samples == 0.
McEstimate mc_iou(const RBox2& g, const RBox2& d, std::uint64_t samples, std::uint64_t seed);

/// IoU from Sutherland-Hodgman clipping of g against the four half-planes
/// of d.
double clip_iou(const RBox2& g, const RBox2& d);

enum class Regime { Overlap, Touch, Disjoint, Nested };
inline constexpr std::array<Regime, 4> kAllRegimes{Regime::Overlap, Regime::Touch, Regime::Disjoint,
                                                   Regime::Nested};
const char* to_string(Regime r);

struct PairGenSpec {
  double center_min = -10.0;
  double center_max = 10.0;
  double size_min = 0.5;
  double size_max = 5.0;
  double yaw_min = -std::numbers::pi;
  double yaw_max = std::numbers::pi;
  // Relative frequency of Overlap, Touch, Disjoint, Nested.
  std::array<double, 4> regime_weights{1.0, 1.0, 1.0, 1.0};
  // Vertical placement for 3D pairs.
  double z_min = -1.0;
  double z_max = 1.0;
  double height_min = 0.5;
  double height_max = 3.0;
};

struct BoxPair {
  RBox2 g;
  RBox2 d;
  Regime regime;
};

struct Box3Pair {
  Box3 g;
  Box3 d;
  Regime regime;
};

/// Reproducible pair for a given seed. Throws std::domain_error for
/// empty or inverted ranges, non-positive sizes or unusable weights.
BoxPair random_pair(const PairGenSpec& spec, std::uint64_t seed);

/// Footprints as random_pair; overlapping and nested footprints get
/// overlapping height ranges.
Box3Pair random_pair_3d(const PairGenSpec& spec, std::uint64_t seed);

}  // namespace rotiou::oracle
