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

#include "rotiou/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "rotiou/overlap.hpp"

namespace rotiou::eval {

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "Easy";
    case Difficulty::Moderate: return "Moderate";
    case Difficulty::Hard: return "Hard";
    case Difficulty::Ignored: return "Ignored";
  }
  return "?";
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::BEV: return "bev";
    case Mode::Full3D: return "3d";
    case Mode::Image2D: return "2d";
  }
  return "?";
}

Difficulty assign_difficulty(const GtObject& gt) {
  struct Limits {
    double min_height;
    int max_occlusion;
    double max_truncation;
  };
  static constexpr std::array<Limits, 3> kLimits{{{40.0, 0, 0.15}, {25.0, 1, 0.30}, {25.0, 2, 0.50}}};
  const double height = gt.image_bbox_height();
  for (std::size_t i = 0; i < kLimits.size(); ++i) {
    const Limits& lim = kLimits[i];
    if (height >= lim.min_height && gt.occlusion <= lim.max_occlusion && gt.truncation <= lim.max_truncation) {
      return kEvaluatedDifficulties[i];
    }
  }
  return Difficulty::Ignored;
}

double match_iou(const Detection& det, const GtObject& gt, Mode mode) {
  switch (mode) {
    case Mode::BEV: return rotated_iou(gt.box.bev(), det.box.bev()).iou;
    case Mode::Full3D: return iou_3d(gt.box, det.box).iou;
    case Mode::Image2D: return aa_iou(gt.image_box, det.image_box).iou;
  }
  return 0.0;
}

namespace {

void check_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw std::invalid_argument("IoU threshold must lie in (0, 1), got " + std::to_string(t));
  }
}

bool counts_at(Difficulty gt, Difficulty level) {
  return gt != Difficulty::Ignored && static_cast<int>(gt) <= static_cast<int>(level);
}

// iou[i * n_gt + j] is the overlap of detection i with ground truth j.
FrameMatch match_with(std::span<const Detection> dets, std::span<const Difficulty> gt_difficulty,
                      std::span<const double> iou, double threshold, Difficulty level) {
  const std::size_t n_gt = gt_difficulty.size();
  FrameMatch m;
  m.outcome.assign(dets.size(), Outcome::FalsePositive);
  m.matched_gt.assign(dets.size(), -1);
  m.gt_matched.assign(n_gt, false);
  for (std::size_t j = 0; j < n_gt; ++j) m.gt_count += counts_at(gt_difficulty[j], level);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  for (std::size_t i : order) {
    int best = -1;
    double best_iou = threshold;
    bool hits_ignored = false;
    for (std::size_t j = 0; j < n_gt; ++j) {
      const double o = iou[i * n_gt + j];
      if (o < threshold) continue;
      if (!counts_at(gt_difficulty[j], level)) {
        hits_ignored = true;
      } else if (!m.gt_matched[j] && (best < 0 || o > best_iou)) {
        best = static_cast<int>(j);
        best_iou = o;
      }
    }
    if (best >= 0) {
      m.outcome[i] = Outcome::TruePositive;
      m.matched_gt[i] = best;
      m.gt_matched[static_cast<std::size_t>(best)] = true;
    } else if (hits_ignored) {
      m.outcome[i] = Outcome::Discarded;
    }
  }
  return m;
}

std::vector<double> iou_matrix(std::span<const Detection> dets, std::span<const GtObject> gts, Mode mode) {
  std::vector<double> iou(dets.size() * gts.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) iou[i * gts.size() + j] = match_iou(dets[i], gts[j], mode);
  }
  return iou;
}

}  // namespace

FrameMatch match_frame(std::span<const Detection> dets, std::span<const GtObject> gts, double threshold,
                       Mode mode, Difficulty level) {
  check_threshold(threshold);
  std::vector<Difficulty> diff;
  diff.reserve(gts.size());
  for (const GtObject& g : gts) diff.push_back(assign_difficulty(g));
  return match_with(dets, diff, iou_matrix(dets, gts, mode), threshold, level);
}

double average_precision(std::span<const PrPoint> pr, Interpolation interp) {
  const int first = interp == Interpolation::Eleven ? 0 : 1;
  const int last = interp == Interpolation::Eleven ? 10 : 40;
  const double denom = last;
  double sum = 0.0;
  for (int k = first; k <= last; ++k) {
    const double r = k / denom;
    double best = 0.0;
    for (const PrPoint& p : pr) {
      if (p.recall >= r) best = std::max(best, p.precision);
    }
    sum += best;
  }
  return sum / static_cast<double>(last - first + 1) * 100.0;
}

std::array<double, 10> map_sweep() {
  std::array<double, 10> t{};
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(50 + 5 * k) / 100.0;
  return t;
}

namespace {

// One class's data split by frame, with overlaps computed once.
struct FrameData {
  std::vector<Detection> dets;
  std::vector<GtObject> gts;
  std::vector<Difficulty> difficulty;
  std::vector<double> iou;
};

struct Scored {
  double score;
  const std::string* frame;
  std::size_t index;
  bool tp;
};

ApEntry ap_entry(const std::map<std::string, FrameData>& frames, double threshold, Difficulty level,
                 Interpolation interp, std::size_t& gt_count) {
  std::vector<Scored> scored;
  gt_count = 0;
  for (const auto& [frame_id, f] : frames) {
    const FrameMatch m = match_with(f.dets, f.difficulty, f.iou, threshold, level);
    gt_count += m.gt_count;
    for (std::size_t i = 0; i < f.dets.size(); ++i) {
      if (m.outcome[i] == Outcome::Discarded) continue;
      scored.push_back({f.dets[i].score, &frame_id, i, m.outcome[i] == Outcome::TruePositive});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(*a.frame, a.index) < std::tie(*b.frame, b.index);
  });

  ApEntry e;
  e.threshold = threshold;
  if (gt_count == 0) return e;
  std::size_t tp = 0;
  std::size_t seen = 0;
  e.pr.reserve(scored.size());
  for (const Scored& s : scored) {
    ++seen;
    tp += s.tp;
    e.pr.push_back({static_cast<double>(tp) / static_cast<double>(gt_count),
                    static_cast<double>(tp) / static_cast<double>(seen)});
  }
  e.ap = average_precision(e.pr, interp);
  return e;
}

}  // namespace

EvalReport evaluate(std::span<const GtObject> gts, std::span<const Detection> dets, const EvalConfig& config) {
  for (double t : config.thresholds) check_threshold(t);
  EvalReport report;
  report.mode = config.mode;
  report.interpolation = config.interpolation;

  for (const std::string& cls : config.classes) {
    std::map<std::string, FrameData> frames;
    for (const GtObject& g : gts) {
      if (g.class_label != cls) continue;
      FrameData& f = frames[g.frame_id];
      f.gts.push_back(g);
      f.difficulty.push_back(assign_difficulty(g));
    }
    if (frames.empty()) {
      report.skipped.push_back(cls);
      continue;
    }
    for (const Detection& d : dets) {
      if (d.class_label == cls) frames[d.frame_id].dets.push_back(d);
    }
    for (auto& [id, f] : frames) f.iou = iou_matrix(f.dets, f.gts, config.mode);

    for (Difficulty level : kEvaluatedDifficulties) {
      DifficultyReport row;
      row.class_label = cls;
      row.difficulty = level;
      for (double t : config.thresholds) {
        row.at_thresholds.push_back(ap_entry(frames, t, level, config.interpolation, row.gt_count));
      }
      double sum = 0.0;
      bool complete = true;
      for (double t : map_sweep()) {
        row.sweep.push_back(ap_entry(frames, t, level, config.interpolation, row.gt_count));
        if (row.sweep.back().ap) {
          sum += *row.sweep.back().ap;
        } else {
          complete = false;
        }
      }
      if (complete) row.map = sum / static_cast<double>(row.sweep.size());
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string format_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[64];
  out << "mode " << to_string(report.mode) << ", "
      << (report.interpolation == Interpolation::Eleven ? "11" : "40") << "-point AP\n";
  out << "class       difficulty    gts";
  if (!report.rows.empty()) {
    for (const ApEntry& e : report.rows.front().at_thresholds) {
      std::snprintf(buf, sizeof buf, "  AP@%.2f", e.threshold);
      out << buf;
    }
  }
  out << "      mAP\n";
  auto cell = [&](const std::optional<double>& v) {
    if (v) {
      std::snprintf(buf, sizeof buf, "  %7.2f", *v);
    } else {
      std::snprintf(buf, sizeof buf, "  %7s", "-");
    }
    out << buf;
  };
  for (const DifficultyReport& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-11s %-10s %6zu", row.class_label.c_str(), to_string(row.difficulty),
                  row.gt_count);
    out << buf;
    for (const ApEntry& e : row.at_thresholds) cell(e.ap);
    cell(row.map);
    out << '\n';
  }
  for (const std::string& s : report.skipped) out << "skipped " << s << ": no ground truth\n";
  return out.str();
}

}  // namespace rotiou::eval
