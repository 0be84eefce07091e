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

#include <optional>
#include <vector>

#include "rotiou/geometry.hpp"

namespace rotiou {

// Candidate intersection vertices closer than this are merged.
inline constexpr double kDedupEps = 1e-7;

/// Where an intersection-polygon vertex came from. Edge k of a box joins
/// corner k to corner (k + 1) % 4.
struct VertexSource {
  enum class Kind { EdgeCrossing, Corner };

  Kind kind = Kind::Corner;
  // EdgeCrossing: edge of the first box, edge of the second box.
  // Corner: box id (0 = first, 1 = second), corner index.
  int a = 0;
  int b = 0;

  static VertexSource crossing(int edge_g, int edge_d) { return {Kind::EdgeCrossing, edge_g, edge_d}; }
  static VertexSource corner(int box, int index) { return {Kind::Corner, box, index}; }

  /// Dense integer id in [0, 24).
  int code() const { return kind == Kind::EdgeCrossing ? 4 * a + b : 16 + 4 * a + b; }

  friend bool operator==(const VertexSource&, const VertexSource&) = default;
};

struct OverlapResult {
  double intersection_area = 0.0;  // volume for 3D boxes
  double union_area = 0.0;
  double iou = 0.0;
  // Sources of the (footprint) intersection polygon, in polygon order.
  std::vector<VertexSource> vertex_provenance;
};

/// Intersection polygon together with the origin of each vertex.
struct TracedPolygon {
  ConvexPoly polygon;
  std::vector<VertexSource> sources;
};

OverlapResult aa_iou(const AABox2& g, const AABox2& d);

/// Crossing point of segments p1-p2 and q1-q2. Returns nullopt for
/// (near-)parallel segments, where |sin| of the angle between them is at
/// most kGeomEps, and when either crossing parameter falls outside [0, 1].
std::optional<Vec2> segment_intersection(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2);

/// Boundary-inclusive (with kGeomEps slack) containment test.
bool point_in_rbox(Vec2 p, const RBox2& b);

/// Convex intersection region of two rotated boxes: edge crossings plus
/// contained corners, deduplicated and sorted counterclockwise about their
/// centroid. nullopt when fewer than 3 distinct vertices remain.
std::optional<TracedPolygon> intersection_polygon_traced(const RBox2& g, const RBox2& d);
std::optional<ConvexPoly> intersection_polygon(const RBox2& g, const RBox2& d);

OverlapResult rotated_iou(const RBox2& g, const RBox2& d);

/// Volume IoU of yaw-only cuboids: footprint overlap times height overlap.
OverlapResult iou_3d(const Box3& g, const Box3& d);

/// Smallest axis-aligned rectangle containing all eight corners.
AABox2 enclosing_aabb(const RBox2& g, const RBox2& d);

/// Convex hull of the eight corners, counterclockwise, collinear points
/// dropped. `corner_ids` names each hull vertex: 0-3 are corners of g,
/// 4-7 corners of d.
struct TracedHull {
  ConvexPoly polygon;
  std::vector<int> corner_ids;
};
TracedHull enclosing_hull_traced(const RBox2& g, const RBox2& d);

/// Shape C in GIoU = IoU - (C - U) / C.
///
/// ConvexHull is exact for identical boxes at any yaw (C = U, GIoU = 1).
/// AxisAligned overestimates C for rotated boxes, so GIoU stays below 1
/// even for a perfect match.
enum class Enclosure { ConvexHull, AxisAligned };

double enclosure_area(const RBox2& g, const RBox2& d, Enclosure kind);

double giou(const RBox2& g, const RBox2& d, Enclosure kind = Enclosure::ConvexHull);

/// GIoU of cuboids; the enclosure is the footprint enclosure extruded over
/// the combined height range.
double giou_3d(const Box3& g, const Box3& d, Enclosure kind = Enclosure::ConvexHull);

}  // namespace rotiou
