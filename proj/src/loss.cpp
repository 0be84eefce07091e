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

#include "rotiou/loss.hpp"

#include <algorithm>
#include <type_traits>

namespace rotiou {

namespace {

void check_batch(const LossSpec& spec, std::size_t n_pred, std::size_t n_target, Dimensionality want) {
  if (spec.dimensionality != want) {
    throw std::invalid_argument("loss spec dimensionality does not match the box type");
  }
  if (n_pred != n_target) {
    throw std::domain_error("predicted and target batches differ in length: " +
                                std::to_string(n_pred) + " vs " + std::to_string(n_target));
  }
  if (n_pred == 0) {
    throw std::domain_error("empty batch");
  }
}

template <typename Grad, typename Box, typename MetricFn>
BatchLossResult<Grad> run_batch(const LossSpec& spec, std::span<const Box> predicted,
                                std::span<const Box> target, MetricFn metric) {
  const std::size_t n = predicted.size();
  const double grad_scale =
      spec.reduction == Reduction::Mean ? -spec.weight / static_cast<double>(n) : -spec.weight;

  BatchLossResult<Grad> out;
  out.per_pair_loss.reserve(n);
  out.per_pair_grad_d.reserve(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = metric(target[i], predicted[i]);
    const double loss = spec.weight * (1.0 - r.value);
    out.per_pair_loss.push_back(loss);
    sum += loss;

    auto g = r.grad_d.as_array();
    for (double& v : g) v *= grad_scale;
    Grad scaled;
    if constexpr (std::is_same_v<Grad, BoxGrad2>) {
      scaled = {g[0], g[1], g[2], g[3], g[4]};
    } else {
      scaled = {g[0], g[1], g[2], g[3], g[4], g[5], g[6]};
    }
    out.per_pair_grad_d.push_back(scaled);
  }
  out.total = spec.reduction == Reduction::Mean ? sum / static_cast<double>(n) : sum;
  return out;
}

}  // namespace

BatchLossResult<BoxGrad2> iou_loss(const LossSpec& spec, std::span<const RBox2> predicted,
                                   std::span<const RBox2> target) {
  check_batch(spec, predicted.size(), target.size(), Dimensionality::Rot2D);
  if (spec.kind == LossKind::IoU) {
    return run_batch<BoxGrad2>(spec, predicted, target, diff_rotated_iou);
  }
  return run_batch<BoxGrad2>(spec, predicted, target, [&](const RBox2& g, const RBox2& d) {
    return diff_giou(g, d, spec.enclosure);
  });
}

BatchLossResult<BoxGrad3> iou_loss(const LossSpec& spec, std::span<const Box3> predicted,
                                   std::span<const Box3> target) {
  check_batch(spec, predicted.size(), target.size(), Dimensionality::Box3D);
  if (spec.kind == LossKind::IoU) {
    return run_batch<BoxGrad3>(spec, predicted, target, diff_iou_3d);
  }
  return run_batch<BoxGrad3>(spec, predicted, target, [&](const Box3& g, const Box3& d) {
    return diff_giou_3d(g, d, spec.enclosure);
  });
}

InvalidRow::InvalidRow(std::string which, std::size_t row, const std::string& reason)
    : std::invalid_argument(which + " row " + std::to_string(row) + ": " + reason),
      which_(std::move(which)),
      row_(row) {}

std::size_t columns_for(Dimensionality dim) { return dim == Dimensionality::Rot2D ? 5 : 7; }

namespace {

template <typename Box>
std::vector<Box> parse_rows(std::span<const double> data, std::size_t cols, const char* which) {
  std::vector<Box> boxes;
  boxes.reserve(data.size() / cols);
  for (std::size_t row = 0; row * cols < data.size(); ++row) {
    typename Box::Params p;
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(row * cols), cols, p.begin());
    try {
      boxes.emplace_back(p);
    } catch (const std::invalid_argument& e) {
      throw InvalidRow(which, row, e.what());
    }
  }
  return boxes;
}

template <typename Box>
FlatLossResult flat_loss(const LossSpec& spec, std::span<const double> predicted,
                         std::span<const double> target, std::size_t cols) {
  const auto pred = parse_rows<Box>(predicted, cols, "predicted");
  const auto tgt = parse_rows<Box>(target, cols, "target");
  const auto r = iou_loss(spec, std::span<const Box>(pred), std::span<const Box>(tgt));
  FlatLossResult out;
  out.losses = r.per_pair_loss;
  out.total = r.total;
  out.grads.reserve(predicted.size());
  for (const auto& g : r.per_pair_grad_d) {
    const auto a = g.as_array();
    out.grads.insert(out.grads.end(), a.begin(), a.end());
  }
  return out;
}

}  // namespace

FlatLossResult iou_loss_rows(const LossSpec& spec, std::span<const double> predicted,
                             std::span<const double> target) {
  const std::size_t cols = columns_for(spec.dimensionality);
  if (predicted.size() % cols != 0 || target.size() % cols != 0) {
    throw std::invalid_argument("array length is not a multiple of " + std::to_string(cols) + " columns");
  }
  if (predicted.size() != target.size()) {
    throw std::domain_error("predicted and target arrays differ in shape");
  }
  if (spec.dimensionality == Dimensionality::Rot2D) {
    return flat_loss<RBox2>(spec, predicted, target, cols);
  }
  return flat_loss<Box3>(spec, predicted, target, cols);
}

}  // namespace rotiou
