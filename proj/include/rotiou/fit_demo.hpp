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

#include <cstdint>
#include <string>
#include <vector>

#include "rotiou/geometry.hpp"

// Gradient descent of a single predicted box toward a fixed target, used
// to compare how L1, IoU and GIoU losses drive the evaluation IoU.
namespace rotiou::fit {

enum class Loss { L1, IoU, GIoU };
enum class Init { Overlap, Disjoint };

struct Config {
  Loss loss = Loss::IoU;
  Init init = Init::Overlap;
  int steps = 500;
  double lr = 0.01;
  std::uint64_t seed = 0;
};

struct Step {
  int step = 0;
  double loss_value = 0.0;
  double eval_iou = 0.0;
  RBox2::Params box{};
};

struct Trace {
  RBox2 target;
  std::vector<Step> steps;  // steps + 1 rows: the state before each update and the final state

  double final_iou() const { return steps.back().eval_iou; }
  /// First step whose evaluation IoU is at least `level`, or -1.
  int first_step_reaching(double level) const;
};

/// Smallest extent a box may shrink to during descent.
inline constexpr double kMinExtent = 1e-3;

RBox2 target_box();
RBox2 initial_box(Init init, std::uint64_t seed);

/// Throws std::invalid_argument for steps < 0 or a non-positive or
/// non-finite learning rate.
Trace run(const Config& config);

/// CSV with header step,loss_value,eval_iou,cx,cy,w,l,yaw; values are
/// printed with round-trip precision.
std::string to_csv(const Trace& trace);

const char* to_string(Loss l);
const char* to_string(Init i);

}  // namespace rotiou::fit
