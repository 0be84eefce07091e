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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rotiou/eval.hpp"

namespace rotiou::eval {

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& reason)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason), file_(file), line_(line) {}

Box3 kitti_to_box(const KittiBox& k) {
  // Location is the bottom-face center in camera coordinates (y down).
  return {k.x, k.z, -k.y + 0.5 * k.h, k.l, k.w, k.h, -k.rotation_y};
}

KittiBox box_to_kitti(const Box3& b) {
  return {b.h(), b.l(), b.w(), b.cx(), -b.bottom(), b.cy(), normalize_angle(-b.yaw())};
}

namespace {

struct RawLine {
  std::string type;
  double truncation;
  double occlusion;
  std::array<double, 4> bbox;  // left top right bottom
  KittiBox box;
  double score;
};

double to_number(const std::string& token, const std::string& file, std::size_t line, const char* field) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(file, line, std::string("bad ") + field + " '" + token + "'");
  }
  return v;
}

// Returns false for lines that carry no object.
bool parse_line(const std::string& text, bool with_score, const std::string& file, std::size_t line,
                RawLine& out) {
  std::istringstream in(text);
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  if (tok.empty()) return false;
  const std::size_t want = with_score ? 16 : 15;
  if (tok.size() != want) {
    throw ParseError(file, line,
                     "expected " + std::to_string(want) + " fields, found " + std::to_string(tok.size()));
  }
  out.type = tok[0];
  if (out.type == "DontCare") return false;
  out.truncation = to_number(tok[1], file, line, "truncation");
  out.occlusion = to_number(tok[2], file, line, "occlusion");
  for (std::size_t i = 0; i < 4; ++i) out.bbox[i] = to_number(tok[4 + i], file, line, "bbox");
  out.box = {to_number(tok[8], file, line, "height"),  to_number(tok[9], file, line, "width"),
             to_number(tok[10], file, line, "length"), to_number(tok[11], file, line, "x"),
             to_number(tok[12], file, line, "y"),      to_number(tok[13], file, line, "z"),
             to_number(tok[14], file, line, "rotation_y")};
  out.score = with_score ? to_number(tok[15], file, line, "score") : 0.0;
  return true;
}

template <typename T, typename Build>
std::vector<T> parse_lines(const std::string& text, bool with_score, const std::string& file, Build build) {
  std::vector<T> out;
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    RawLine raw;
    if (!parse_line(line, with_score, file, line_no, raw)) continue;
    try {
      out.push_back(build(raw));
    } catch (const std::invalid_argument& e) {
      throw ParseError(file, line_no, e.what());
    }
  }
  return out;
}

AABox2 image_box_of(const RawLine& r) { return {r.bbox[0], r.bbox[1], r.bbox[2], r.bbox[3]}; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> label_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string fmt_line(const std::string& type, double truncation, int occlusion, const AABox2& bbox,
                     const Box3& box) {
  const KittiBox k = box_to_kitti(box);
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %.17g %d -10 %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g",
                type.c_str(), truncation, occlusion, bbox.x_min(), bbox.y_min(), bbox.x_max(), bbox.y_max(),
                k.h, k.w, k.l, k.x, k.y, k.z, k.rotation_y);
  return buf;
}

}  // namespace

std::vector<GtObject> parse_gt(const std::string& text, const std::string& frame_id, const std::string& file_name) {
  return parse_lines<GtObject>(text, false, file_name, [&](const RawLine& r) {
    if (!(r.truncation >= 0.0 && r.truncation <= 1.0)) {
      throw std::invalid_argument("truncation outside [0, 1]");
    }
    if (r.occlusion != std::floor(r.occlusion) || r.occlusion < 0 || r.occlusion > 3) {
      throw std::invalid_argument("occlusion must be one of 0, 1, 2, 3");
    }
    return GtObject{frame_id, r.type, kitti_to_box(r.box), r.truncation, static_cast<int>(r.occlusion),
                    image_box_of(r)};
  });
}

std::vector<Detection> parse_detections(const std::string& text, const std::string& frame_id,
                                        const std::string& file_name) {
  // Detection files conventionally carry -1 for truncation and occlusion;
  // those fields are read but not used.
  return parse_lines<Detection>(text, true, file_name, [&](const RawLine& r) {
    return Detection{frame_id, r.type, kitti_to_box(r.box), r.score, image_box_of(r)};
  });
}

std::vector<GtObject> read_gt_dir(const std::filesystem::path& dir) {
  std::vector<GtObject> out;
  for (const auto& f : label_files(dir)) {
    auto objs = parse_gt(read_file(f), f.stem().string(), f.string());
    out.insert(out.end(), objs.begin(), objs.end());
  }
  return out;
}

std::vector<Detection> read_detection_dir(const std::filesystem::path& dir) {
  std::vector<Detection> out;
  for (const auto& f : label_files(dir)) {
    auto dets = parse_detections(read_file(f), f.stem().string(), f.string());
    out.insert(out.end(), dets.begin(), dets.end());
  }
  return out;
}

std::string format_label(const GtObject& gt) {
  return fmt_line(gt.class_label, gt.truncation, gt.occlusion, gt.image_box, gt.box);
}

std::string format_label(const Detection& det) {
  char score[32];
  std::snprintf(score, sizeof score, " %.17g", det.score);
  return fmt_line(det.class_label, -1, -1, det.image_box, det.box) + score;
}

}  // namespace rotiou::eval
