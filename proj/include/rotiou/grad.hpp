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
#include <functional>
#include <span>
#include <vector>

#include "rotiou/geometry.hpp"
#include "rotiou/overlap.hpp"
#include "rotiou/tape.hpp"

namespace rotiou {

/// d(metric)/d(parameter) for a rotated 2D box.
struct BoxGrad2 {
  double d_cx = 0.0;
  double d_cy = 0.0;
  double d_w = 0.0;
  double d_l = 0.0;
  double d_yaw = 0.0;

  std::array<double, 5> as_array() const { return {d_cx, d_cy, d_w, d_l, d_yaw}; }
  friend bool operator==(const BoxGrad2&, const BoxGrad2&) = default;
};

/// d(metric)/d(parameter) for a yaw-only cuboid.
struct BoxGrad3 {
  double d_cx = 0.0;
  double d_cy = 0.0;
  double d_cz = 0.0;
  double d_w = 0.0;
  double d_l = 0.0;
  double d_h = 0.0;
  double d_yaw = 0.0;

  std::array<double, 7> as_array() const { return {d_cx, d_cy, d_cz, d_w, d_l, d_h, d_yaw}; }
  friend bool operator==(const BoxGrad3&, const BoxGrad3&) = default;
};

/// Metric value with gradients for the detected (d) and ground-truth (g)
/// box. `signature` encodes every discrete decision of the forward pass;
/// two evaluations with equal signatures lie on the same smooth piece.
template <typename Grad>
struct DiffResult {
  double value = 0.0;
  Grad grad_d;
  Grad grad_g;
  std::vector<int> signature;
};

using DiffResult2 = DiffResult<BoxGrad2>;
using DiffResult3 = DiffResult<BoxGrad3>;

// Branch-frozen reverse-mode gradients: corner containment, the set of
// crossing edges and the vertex order are taken from the forward pass and
// held constant, so the result is the exact gradient of the smooth piece
// the inputs lie on.
DiffResult2 diff_rotated_iou(const RBox2& g, const RBox2& d);
DiffResult3 diff_iou_3d(const Box3& g, const Box3& d);
DiffResult2 diff_giou(const RBox2& g, const RBox2& d, Enclosure kind = Enclosure::ConvexHull);
DiffResult3 diff_giou_3d(const Box3& g, const Box3& d, Enclosure kind = Enclosure::ConvexHull);

struct TapePoint {
  ad::Var x;
  ad::Var y;
};

/// Crossing point of the lines through p1-p2 and q1-q2 recorded as two
/// custom nodes. The Jacobian with respect to the eight endpoint
/// coordinates comes from implicit differentiation of
///   (X - p1) x (p2 - p1) = 0,  (X - q1) x (q2 - q1) = 0.
/// The lines must not be parallel.
TapePoint crossing_point(ad::Tape& tape, const TapePoint& p1, const TapePoint& p2,
                         const TapePoint& q1, const TapePoint& q2);

// ---------------------------------------------------------------------------
// Finite-difference verification

/// Value, analytic gradient and branch signature of a scalar function.
struct Probe {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<int> signature;
};

using ProbeFn = std::function<Probe(std::span<const double>)>;

enum class FdStatus { Ok, NonSmooth };

struct FdReport {
  FdStatus status = FdStatus::Ok;
  std::vector<double> analytic;
  std::vector<double> numeric;
  std::vector<double> rel_error;
  double max_rel_error = 0.0;
};

// Relative errors are |a - n| / max(|a|, |n|, kGradScaleFloor), so
// components with vanishing gradient are compared in absolute terms.
inline constexpr double kGradScaleFloor = 1e-3;

/// Central differences (f(x+h) - f(x-h)) / 2h per parameter against the
/// analytic gradient. Reports FdStatus::NonSmooth, without errors, when the
/// branch signature changes within +-10h of `point` along any parameter.
FdReport finite_diff_check(const ProbeFn& f, std::span<const double> point, double step = 1e-6);

enum class Metric { IoU, GIoU };

/// Probes over the packed parameters of a box pair: the detected box
/// first, then the ground truth (10 values in 2D, 14 in 3D).
Probe probe_pair_2d(Metric metric, std::span<const double> params,
                    Enclosure kind = Enclosure::ConvexHull);
Probe probe_pair_3d(Metric metric, std::span<const double> params,
                    Enclosure kind = Enclosure::ConvexHull);

}  // namespace rotiou
