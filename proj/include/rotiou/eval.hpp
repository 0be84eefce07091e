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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotiou/geometry.hpp"

// KITTI-style detection evaluation: greedy score-ordered matching, 11/40
// point interpolated AP per difficulty, and mAP over an IoU sweep.
namespace rotiou::eval {

struct GtObject {
  std::string frame_id;
  std::string class_label;
  Box3 box;
  double truncation = 0.0;  // [0, 1]
  int occlusion = 0;        // 0..3
  AABox2 image_box;         // left, top, right, bottom in pixels

  double image_bbox_height() const { return image_box.height(); }
};

struct Detection {
  std::string frame_id;
  std::string class_label;
  Box3 box;
  double score = 0.0;
  AABox2 image_box;
};

// Ordered from least to most permissive; Ignored is never evaluated.
enum class Difficulty { Easy, Moderate, Hard, Ignored };
inline constexpr std::array<Difficulty, 3> kEvaluatedDifficulties{Difficulty::Easy, Difficulty::Moderate,
                                                                  Difficulty::Hard};
const char* to_string(Difficulty d);

/// Easiest level whose height/occlusion/truncation limits the object meets.
Difficulty assign_difficulty(const GtObject& gt);

enum class Mode { BEV, Full3D, Image2D };
const char* to_string(Mode m);

/// Overlap used for matching in the given mode.
double match_iou(const Detection& det, const GtObject& gt, Mode mode);

enum class Outcome { TruePositive, FalsePositive, Discarded };

struct FrameMatch {
  std::vector<Outcome> outcome;   // per detection, input order
  std::vector<int> matched_gt;    // per detection, -1 unless a true positive
  std::vector<bool> gt_matched;   // per ground truth
  std::size_t gt_count = 0;       // ground truths counted at this level
};

/// Matches one frame's detections against its ground truths of the same
/// class. A ground truth counts at `level` when its difficulty is no harder
/// than `level`; the others behave as ignored regions.
FrameMatch match_frame(std::span<const Detection> dets, std::span<const GtObject> gts, double threshold,
                       Mode mode, Difficulty level = Difficulty::Hard);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

enum class Interpolation { Eleven, Forty };

/// Interpolated AP in percent. Empty input means no detections and gives 0.
double average_precision(std::span<const PrPoint> pr, Interpolation interp);

/// The IoU thresholds reported individually and the mAP sweep.
inline constexpr std::array<double, 3> kReportThresholds{0.70, 0.75, 0.80};
std::array<double, 10> map_sweep();

struct EvalConfig {
  std::vector<std::string> classes{"Car"};
  Mode mode = Mode::BEV;
  Interpolation interpolation = Interpolation::Eleven;
  std::vector<double> thresholds{kReportThresholds.begin(), kReportThresholds.end()};
};

struct ApEntry {
  double threshold = 0.0;
  std::optional<double> ap;  // absent when there is no ground truth
  std::vector<PrPoint> pr;
};

struct DifficultyReport {
  std::string class_label;
  Difficulty difficulty = Difficulty::Easy;
  std::size_t gt_count = 0;
  std::vector<ApEntry> at_thresholds;  // config.thresholds order
  std::vector<ApEntry> sweep;          // map_sweep() order
  std::optional<double> map;
};

struct EvalReport {
  Mode mode = Mode::BEV;
  Interpolation interpolation = Interpolation::Eleven;
  std::vector<DifficultyReport> rows;
  std::vector<std::string> skipped;  // requested classes with no ground truth
};

/// Deterministic for any ordering of frames in the inputs. Detections in
/// frames without ground truth count as false positives. Throws
/// std::invalid_argument for a threshold outside (0, 1).
EvalReport evaluate(std::span<const GtObject> gts, std::span<const Detection> dets, const EvalConfig& config);

/// Fixed-width text table of a report.
std::string format_table(const EvalReport& report);

// ---------------------------------------------------------------------------
// KITTI label files.
//
// One object per line: type truncated occluded alpha left top right bottom
// h w l x y z rotation_y, plus a trailing score for detections. Camera
// coordinates have y pointing down and z forward. Boxes map to the library
// frame as center (x, z), bottom at height -y, and yaw = -rotation_y with
// the KITTI length along the heading axis.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& reason);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

struct KittiBox {
  double h, w, l, x, y, z, rotation_y;
};

Box3 kitti_to_box(const KittiBox& k);
KittiBox box_to_kitti(const Box3& b);

/// Parses label files. Lines of type DontCare are skipped; blank lines are
/// allowed. Throws ParseError naming file and line.
std::vector<GtObject> parse_gt(const std::string& text, const std::string& frame_id,
                               const std::string& file_name = "<memory>");
std::vector<Detection> parse_detections(const std::string& text, const std::string& frame_id,
                                        const std::string& file_name = "<memory>");

/// Reads every *.txt file in a directory, in file name order, with the
/// file stem as frame id. Throws std::runtime_error for a missing
/// directory.
std::vector<GtObject> read_gt_dir(const std::filesystem::path& dir);
std::vector<Detection> read_detection_dir(const std::filesystem::path& dir);

/// One KITTI line for the object; detections get a trailing score.
std::string format_label(const GtObject& gt);
std::string format_label(const Detection& det);

}  // namespace rotiou::eval
