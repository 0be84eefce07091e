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

#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "rotiou/eval.hpp"
#include "rotiou/fit_demo.hpp"
#include "rotiou/grad.hpp"
#include "rotiou/oracle.hpp"
#include "rotiou/overlap.hpp"

namespace rotiou::cli {

using nlohmann::json;

std::vector<double> parse_numbers(const std::string& text, std::size_t fields, const std::string& flag) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (token.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
      throw UsageError(flag + ": malformed number '" + token + "' in '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != fields) {
    throw UsageError(flag + ": expected " + std::to_string(fields) + " comma-separated values, got " +
                     std::to_string(out.size()) + " in '" + text + "'");
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Box>
Box make_box(const std::string& text, const std::string& flag) {
  const auto v = parse_numbers(text, Box::kNumParams, flag);
  typename Box::Params p;
  std::copy(v.begin(), v.end(), p.begin());
  try {
    return Box(p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

AABox2 make_aabox(const std::string& text, const std::string& flag) {
  const auto v = parse_numbers(text, 4, flag);
  try {
    return {v[0], v[1], v[2], v[3]};
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

int run_iou(const IouArgs& args, std::ostream& out) {
  const Enclosure enc = args.enclosure == "aabb" ? Enclosure::AxisAligned : Enclosure::ConvexHull;
  OverlapResult r;
  double gi = 0.0;
  if (args.mode == "aa") {
    const AABox2 g = make_aabox(args.g, "--g");
    const AABox2 d = make_aabox(args.d, "--d");
    r = aa_iou(g, d);
    const double cw = std::max(g.x_max(), d.x_max()) - std::min(g.x_min(), d.x_min());
    const double ch = std::max(g.y_max(), d.y_max()) - std::min(g.y_min(), d.y_min());
    const double c = cw * ch;
    gi = c > 0.0 ? r.iou - std::max(0.0, c - r.union_area) / c : r.iou;
  } else if (args.mode == "rot") {
    const RBox2 g = make_box<RBox2>(args.g, "--g");
    const RBox2 d = make_box<RBox2>(args.d, "--d");
    r = rotated_iou(g, d);
    gi = giou(g, d, enc);
  } else {
    const Box3 g = make_box<Box3>(args.g, "--g");
    const Box3 d = make_box<Box3>(args.d, "--d");
    r = iou_3d(g, d);
    gi = giou_3d(g, d, enc);
  }
  if (args.json) {
    out << json{{"mode", args.mode},
                {"iou", r.iou},
                {"giou", gi},
                {"intersection", r.intersection_area},
                {"union", r.union_area}}
               .dump()
        << '\n';
  } else {
    out << "iou " << fmt(r.iou) << "\ngiou " << fmt(gi) << "\nintersection " << fmt(r.intersection_area)
        << "\nunion " << fmt(r.union_area) << '\n';
  }
  return kExitOk;
}

int run_grad_check(const GradCheckArgs& args, std::ostream& out) {
  const Metric metric = args.loss == "giou" ? Metric::GIoU : Metric::IoU;
  const bool three_d = args.mode == "3d";
  const oracle::PairGenSpec gen;
  double max_err = 0.0;
  double sum_err = 0.0;
  int resampled = 0;
  std::uint64_t stream = args.seed;
  for (int i = 0; i < args.pairs;) {
    const std::uint64_t s = splitmix64(stream++);
    std::vector<double> point;
    ProbeFn f;
    if (three_d) {
      const auto p = oracle::random_pair_3d(gen, s);
      const auto dp = p.d.params(), gp = p.g.params();
      point.assign(dp.begin(), dp.end());
      point.insert(point.end(), gp.begin(), gp.end());
      f = [metric](std::span<const double> x) { return probe_pair_3d(metric, x); };
    } else {
      const auto p = oracle::random_pair(gen, s);
      const auto dp = p.d.params(), gp = p.g.params();
      point.assign(dp.begin(), dp.end());
      point.insert(point.end(), gp.begin(), gp.end());
      f = [metric](std::span<const double> x) { return probe_pair_2d(metric, x); };
    }
    const FdReport rep = finite_diff_check(f, point);
    if (rep.status == FdStatus::NonSmooth) {
      ++resampled;
      spdlog::debug("pair seed {} is not smooth; resampling", s);
      continue;
    }
    max_err = std::max(max_err, rep.max_rel_error);
    sum_err += rep.max_rel_error;
    ++i;
  }
  const double mean_err = sum_err / args.pairs;
  const bool pass = max_err <= args.tolerance;
  if (args.json) {
    out << json{{"pairs", args.pairs},         {"seed", args.seed},         {"mode", args.mode},
                {"loss", args.loss},           {"max_rel_error", max_err}, {"mean_rel_error", mean_err},
                {"resampled", resampled},      {"tolerance", args.tolerance}, {"pass", pass}}
               .dump()
        << '\n';
  } else {
    out << "pairs " << args.pairs << " seed " << args.seed << " mode " << args.mode << " loss " << args.loss << '\n'
        << "max_rel_error " << fmt(max_err) << '\n'
        << "mean_rel_error " << fmt(mean_err) << '\n'
        << "resampled_non_smooth " << resampled << '\n'
        << (pass ? "PASS" : "FAIL") << " tolerance " << fmt(args.tolerance) << '\n';
  }
  return pass ? kExitOk : kExitFailure;
}

int run_eval(const EvalArgs& args, std::ostream& out) {
  eval::EvalConfig cfg;
  cfg.classes = args.classes;
  cfg.mode = args.mode == "3d" ? eval::Mode::Full3D : args.mode == "2d" ? eval::Mode::Image2D : eval::Mode::BEV;
  cfg.interpolation = args.interp == 40 ? eval::Interpolation::Forty : eval::Interpolation::Eleven;

  std::vector<eval::GtObject> gts;
  std::vector<eval::Detection> dets;
  try {
    gts = eval::read_gt_dir(args.gt_dir);
    dets = eval::read_detection_dir(args.det_dir);
  } catch (const eval::ParseError& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  spdlog::info("read {} ground truth objects and {} detections", gts.size(), dets.size());
  const eval::EvalReport report = eval::evaluate(gts, dets, cfg);

  json results = json::array();
  json maps = json::array();
  for (const auto& row : report.rows) {
    for (const auto& e : row.at_thresholds) {
      results.push_back({{"class", row.class_label},
                         {"difficulty", eval::to_string(row.difficulty)},
                         {"threshold", e.threshold},
                         {"ap", e.ap ? json(*e.ap) : json(nullptr)}});
    }
    json sweep = json::array();
    for (const auto& e : row.sweep) {
      sweep.push_back({{"threshold", e.threshold}, {"ap", e.ap ? json(*e.ap) : json(nullptr)}});
    }
    maps.push_back({{"class", row.class_label},
                    {"difficulty", eval::to_string(row.difficulty)},
                    {"map", row.map ? json(*row.map) : json(nullptr)},
                    {"sweep", sweep}});
  }
  const json doc{{"mode", eval::to_string(report.mode)},
                 {"interpolation", args.interp},
                 {"results", results},
                 {"map", maps},
                 {"skipped", report.skipped}};

  if (args.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << eval::format_table(report);
  }
  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) {
      spdlog::error("cannot write {}", args.out);
      return kExitFailure;
    }
    f << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int run_fit(const FitArgs& args, std::ostream& out) {
  fit::Config cfg;
  cfg.loss = args.loss == "l1" ? fit::Loss::L1 : args.loss == "giou" ? fit::Loss::GIoU : fit::Loss::IoU;
  cfg.init = args.init == "disjoint" ? fit::Init::Disjoint : fit::Init::Overlap;
  cfg.steps = args.steps;
  cfg.lr = args.lr;
  cfg.seed = args.seed;
  const fit::Trace trace = fit::run(cfg);
  const std::string csv = fit::to_csv(trace);

  const double initial = trace.steps.front().eval_iou;
  const int first_overlap = trace.first_step_reaching(std::nextafter(0.0, 1.0));
  const int first_99 = trace.first_step_reaching(0.99);
  spdlog::info("{} from {}: iou {} -> {}", args.loss, args.init, initial, trace.final_iou());

  if (args.out.empty()) {
    out << csv;
    return kExitOk;
  }
  std::ofstream f(args.out);
  if (!f) {
    spdlog::error("cannot write {}", args.out);
    return kExitFailure;
  }
  f << csv;
  if (args.json) {
    out << json{{"loss", args.loss},
                {"init", args.init},
                {"steps", args.steps},
                {"lr", args.lr},
                {"seed", args.seed},
                {"initial_iou", initial},
                {"final_iou", trace.final_iou()},
                {"first_step_overlapping", first_overlap},
                {"first_step_iou_0_99", first_99}}
               .dump()
        << '\n';
  } else {
    out << "initial_iou " << fmt(initial) << "\nfinal_iou " << fmt(trace.final_iou())
        << "\nfirst_step_overlapping " << first_overlap << "\nfirst_step_iou_0_99 " << first_99 << '\n';
  }
  return kExitOk;
}

}  // namespace rotiou::cli
