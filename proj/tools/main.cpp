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

// rotiou command-line tool. Subcommands: iou, grad-check, eval, fit-demo.
//
// Options may also come from a key=value file given with --config; use
// section headers ([iou], [eval], ...) for subcommand options and quote
// comma-separated box values (g="0,0,2,2,0"). Log
// verbosity is read from ROTIOU_LOG_LEVEL (trace, debug, info, warn,
// error, off; default warn). Exit status: 0 success, 1 tolerance or input
// validation failure, 2 usage error.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_st("rotiou");
  logger->set_pattern("%l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ROTIOU_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honor names it knows.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown ROTIOU_LOG_LEVEL '{}'", env);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rotiou::cli;
  setup_logging();

  CLI::App app{"Rotated-box IoU, gradients, evaluation and fit demos"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);

  IouArgs iou;
  auto* c_iou = app.add_subcommand("iou", "Overlap of two boxes");
  c_iou->add_option("--mode", iou.mode, "aa: x_min,y_min,x_max,y_max; rot: cx,cy,w,l,yaw; 3d: cx,cy,cz,w,l,h,yaw")
      ->check(CLI::IsMember({"aa", "rot", "3d"}));
  c_iou->add_option("--g", iou.g, "Ground-truth box")->required();
  c_iou->add_option("--d", iou.d, "Detected box")->required();
  c_iou->add_option("--enclosure", iou.enclosure, "GIoU enclosing region")->check(CLI::IsMember({"hull", "aabb"}));
  c_iou->add_flag("--json", iou.json, "Structured output");

  GradCheckArgs gc;
  auto* c_gc = app.add_subcommand("grad-check", "Finite-difference check of analytic gradients");
  c_gc->add_option("--pairs", gc.pairs, "Number of smooth pairs")->check(CLI::PositiveNumber);
  c_gc->add_option("--seed", gc.seed, "Seed");
  c_gc->add_option("--mode", gc.mode)->check(CLI::IsMember({"rot", "3d"}));
  c_gc->add_option("--loss", gc.loss)->check(CLI::IsMember({"iou", "giou"}));
  c_gc->add_option("--tolerance", gc.tolerance, "Largest accepted relative error")->check(CLI::PositiveNumber);
  c_gc->add_flag("--json", gc.json, "Structured output");

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "KITTI-style AP evaluation");
  c_ev->add_option("--gt", ev.gt_dir, "Ground-truth label directory")->required()->check(CLI::ExistingDirectory);
  c_ev->add_option("--det", ev.det_dir, "Detection directory")->required()->check(CLI::ExistingDirectory);
  c_ev->add_option("--class", ev.classes, "Classes to evaluate");
  c_ev->add_option("--mode", ev.mode)->check(CLI::IsMember({"bev", "3d", "2d"}));
  c_ev->add_option("--interp", ev.interp, "Interpolation points")->check(CLI::IsMember({11, 40}));
  c_ev->add_option("--out", ev.out, "Write the JSON report here");
  c_ev->add_flag("--json", ev.json, "Print JSON instead of the table");

  FitArgs fa;
  auto* c_fit = app.add_subcommand("fit-demo", "Gradient descent of one box toward a fixed target");
  c_fit->add_option("--loss", fa.loss)->check(CLI::IsMember({"l1", "iou", "giou"}));
  c_fit->add_option("--init", fa.init)->check(CLI::IsMember({"overlap", "disjoint"}));
  c_fit->add_option("--steps", fa.steps)->check(CLI::NonNegativeNumber);
  c_fit->add_option("--lr", fa.lr)->check(CLI::PositiveNumber);
  c_fit->add_option("--seed", fa.seed);
  c_fit->add_option("--out", fa.out, "Write the CSV trace here and print a summary");
  c_fit->add_flag("--json", fa.json, "Summary as JSON (with --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_iou->parsed()) return run_iou(iou, std::cout);
    if (c_gc->parsed()) return run_grad_check(gc, std::cout);
    if (c_ev->parsed()) return run_eval(ev, std::cout);
    return run_fit(fa, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
}
