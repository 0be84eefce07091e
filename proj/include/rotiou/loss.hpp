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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotiou/geometry.hpp"
#include "rotiou/grad.hpp"

namespace rotiou {

enum class LossKind { IoU, GIoU };
enum class Dimensionality { Rot2D, Box3D };
enum class Reduction { Mean, Sum, None };

struct LossSpec {
  LossKind kind = LossKind::IoU;
  Dimensionality dimensionality = Dimensionality::Rot2D;
  Reduction reduction = Reduction::Mean;
  // Caller-side multiplier applied to losses and gradients.
  double weight = 1.0;
  // Enclosing region for GIoU; ignored for plain IoU.
  Enclosure enclosure = Enclosure::ConvexHull;
};

/// Per-pair losses are 1 - metric (times `weight`) and are never divided
/// by the batch size. `total` is their mean for Reduction::Mean and their
/// sum otherwise; `per_pair_grad_d` is the gradient of `total` with
/// respect to each predicted box, except for Reduction::None where each
/// entry is the gradient of its own pair loss.
template <typename Grad>
struct BatchLossResult {
  std::vector<double> per_pair_loss;
  double total = 0.0;
  std::vector<Grad> per_pair_grad_d;
};

/// Box-regression loss over predicted/target pairs. Throws
/// std::domain_error on empty or mismatched batches and
/// std::invalid_argument when spec.dimensionality does not match the box
/// type.
BatchLossResult<BoxGrad2> iou_loss(const LossSpec& spec, std::span<const RBox2> predicted,
                                   std::span<const RBox2> target);
BatchLossResult<BoxGrad3> iou_loss(const LossSpec& spec, std::span<const Box3> predicted,
                                   std::span<const Box3> target);

// ---------------------------------------------------------------------------
// Row-major array surface for foreign-function callers.
//
// Rows hold (cx, cy, w, l, yaw) for Rot2D and (cx, cy, cz, w, l, h, yaw)
// for Box3D.

/// A row violates the box invariants. `row()` is its zero-based index.
class InvalidRow : public std::invalid_argument {
 public:
  InvalidRow(std::string which, std::size_t row, const std::string& reason);
  const std::string& which() const { return which_; }
  std::size_t row() const { return row_; }

 private:
  std::string which_;
  std::size_t row_;
};

struct FlatLossResult {
  std::vector<double> losses;
  double total = 0.0;
  std::vector<double> grads;  // rows x columns, same layout as the input
};

std::size_t columns_for(Dimensionality dim);

/// Array form of iou_loss. Ragged arrays throw std::invalid_argument,
/// arrays of different shape std::domain_error, and rows that fail box
/// validation InvalidRow naming the first offending row.
FlatLossResult iou_loss_rows(const LossSpec& spec, std::span<const double> predicted,
                             std::span<const double> target);

}  // namespace rotiou
