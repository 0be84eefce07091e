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

#include "rotiou/fit_demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rotiou/grad.hpp"
#include "rotiou/overlap.hpp"

namespace rotiou::fit {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

double sign(double v) { return (v > 0.0) - (v < 0.0); }

struct Evaluated {
  double loss;
  RBox2::Params grad;
};

Evaluated l1(const RBox2& target, const RBox2& d) {
  const auto p = d.params();
  const auto t = target.params();
  Evaluated e{0.0, {}};
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double diff = k == 4 ? normalize_angle(p[k] - t[k]) : p[k] - t[k];
    e.loss += std::abs(diff);
    e.grad[k] = sign(diff);
  }
  return e;
}

Evaluated overlap_loss(const DiffResult2& r) {
  const auto g = r.grad_d.as_array();
  return {1.0 - r.value, {-g[0], -g[1], -g[2], -g[3], -g[4]}};
}

Evaluated evaluate(Loss loss, const RBox2& target, const RBox2& d) {
  switch (loss) {
    case Loss::L1: return l1(target, d);
    case Loss::IoU: return overlap_loss(diff_rotated_iou(target, d));
    case Loss::GIoU: return overlap_loss(diff_giou(target, d));
  }
  throw std::logic_error("unhandled loss");
}

}  // namespace

int Trace::first_step_reaching(double level) const {
  for (const Step& s : steps) {
    if (s.eval_iou >= level) return s.step;
  }
  return -1;
}

const char* to_string(Loss l) {
  switch (l) {
    case Loss::L1: return "l1";
    case Loss::IoU: return "iou";
    case Loss::GIoU: return "giou";
  }
  return "?";
}

const char* to_string(Init i) { return i == Init::Overlap ? "overlap" : "disjoint"; }

RBox2 target_box() { return {1.0, 0.5, 2.0, 1.0, 0.3}; }

RBox2 initial_box(Init init, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const RBox2 t = target_box();
  const double w = t.w() * uniform(rng, 0.6, 1.5);
  const double l = t.l() * uniform(rng, 0.6, 1.5);
  const double yaw = t.yaw() + uniform(rng, -0.5, 0.5);
  const double dir = uniform(rng, -std::numbers::pi, std::numbers::pi);
  // Overlap: center within a quarter of the target's short side. Disjoint:
  // beyond both circumradii plus a small gap.
  const double dist = init == Init::Overlap
                          ? uniform(rng, 0.0, 0.25 * std::min(t.w(), t.l()))
                          : 0.5 * (std::hypot(t.w(), t.l()) + std::hypot(w, l)) + uniform(rng, 0.2, 0.5);
  return {t.cx() + dist * std::cos(dir), t.cy() + dist * std::sin(dir), w, l, yaw};
}

Trace run(const Config& config) {
  if (config.steps < 0) throw std::invalid_argument("steps must be nonnegative");
  if (!(config.lr > 0.0) || !std::isfinite(config.lr)) {
    throw std::invalid_argument("learning rate must be positive and finite");
  }
  Trace trace{target_box(), {}};
  RBox2 d = initial_box(config.init, config.seed);
  trace.steps.reserve(static_cast<std::size_t>(config.steps) + 1);
  for (int step = 0;; ++step) {
    const Evaluated e = evaluate(config.loss, trace.target, d);
    trace.steps.push_back({step, e.loss, rotated_iou(trace.target, d).iou, d.params()});
    if (step == config.steps) break;
    auto p = d.params();
    for (std::size_t k = 0; k < p.size(); ++k) p[k] -= config.lr * e.grad[k];
    p[2] = std::max(p[2], kMinExtent);
    p[3] = std::max(p[3], kMinExtent);
    d = RBox2(p);
  }
  return trace;
}

std::string to_csv(const Trace& trace) {
  std::ostringstream out;
  out << "step,loss_value,eval_iou,cx,cy,w,l,yaw\n";
  char buf[256];
  for (const Step& s : trace.steps) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.step, s.loss_value,
                  s.eval_iou, s.box[0], s.box[1], s.box[2], s.box[3], s.box[4]);
    out << buf;
  }
  return out.str();
}

}  // namespace rotiou::fit
