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

#include "rotiou/overlap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace rotiou {

namespace {

// Angles about the centroid that differ by less than this are treated as
// equal and ordered by distance instead.
constexpr double kAngleTieEps = 1e-12;

double finish_iou(double intersection, double union_area) {
  return std::min(1.0, intersection / union_area);
}

// Orders vertices counterclockwise about their centroid; returns the
// permutation applied.
std::vector<std::size_t> angular_order(const std::vector<Vec2>& pts) {
  Vec2 centroid{0.0, 0.0};
  for (const Vec2& p : pts) {
    centroid = centroid + p;
  }
  centroid = centroid * (1.0 / static_cast<double>(pts.size()));

  std::vector<double> angle(pts.size());
  std::vector<double> dist(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 r = pts[i] - centroid;
    angle[i] = std::atan2(r.y, r.x);
    dist[i] = dot(r, r);
  }

  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (angle[a] != angle[b]) return angle[a] < angle[b];
    return dist[a] < dist[b];
  });
  // Near-equal angles: order by distance from the centroid.
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const std::size_t a = order[k];
    const std::size_t b = order[k + 1];
    if (std::abs(angle[a] - angle[b]) <= kAngleTieEps && dist[b] < dist[a]) {
      std::swap(order[k], order[k + 1]);
    }
  }
  return order;
}

}  // namespace

OverlapResult aa_iou(const AABox2& g, const AABox2& d) {
  const double iw = std::max(0.0, std::min(g.x_max(), d.x_max()) - std::max(g.x_min(), d.x_min()));
  const double ih = std::max(0.0, std::min(g.y_max(), d.y_max()) - std::max(g.y_min(), d.y_min()));
  OverlapResult r;
  r.intersection_area = iw * ih;
  r.union_area = g.area() + d.area() - r.intersection_area;
  r.iou = r.union_area > 0.0 ? finish_iou(r.intersection_area, r.union_area) : 0.0;
  return r;
}

std::optional<Vec2> segment_intersection(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const Vec2 r = p2 - p1;
  const Vec2 s = q2 - q1;
  const double denom = cross(r, s);
  if (std::abs(denom) <= kGeomEps * norm(r) * norm(s)) {
    return std::nullopt;
  }
  const Vec2 w = q1 - p1;
  const double t = cross(w, s) / denom;
  const double u = cross(w, r) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) {
    return std::nullopt;
  }
  return p1 + r * t;
}

bool point_in_rbox(Vec2 p, const RBox2& b) {
  const double c = std::cos(b.yaw());
  const double s = std::sin(b.yaw());
  const Vec2 rel = p - b.center();
  const double u = c * rel.x + s * rel.y;
  const double v = -s * rel.x + c * rel.y;
  return std::abs(u) <= 0.5 * b.w() + kGeomEps && std::abs(v) <= 0.5 * b.l() + kGeomEps;
}

std::optional<TracedPolygon> intersection_polygon_traced(const RBox2& g, const RBox2& d) {
  const auto cg = corners(g);
  const auto cd = corners(d);

  std::vector<Vec2> pts;
  std::vector<VertexSource> src;
  pts.reserve(24);
  src.reserve(24);
  auto add = [&](Vec2 p, VertexSource s) {
    for (const Vec2& q : pts) {
      if (norm(p - q) < kDedupEps) return;
    }
    pts.push_back(p);
    src.push_back(s);
  };

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (auto x = segment_intersection(cg[i], cg[(i + 1) % 4], cd[j], cd[(j + 1) % 4])) {
        add(*x, VertexSource::crossing(i, j));
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    if (point_in_rbox(cg[i], d)) add(cg[i], VertexSource::corner(0, i));
  }
  for (int i = 0; i < 4; ++i) {
    if (point_in_rbox(cd[i], g)) add(cd[i], VertexSource::corner(1, i));
  }

  if (pts.size() < 3) {
    return std::nullopt;
  }

  TracedPolygon out;
  out.polygon.vertices.reserve(pts.size());
  out.sources.reserve(pts.size());
  for (std::size_t k : angular_order(pts)) {
    out.polygon.vertices.push_back(pts[k]);
    out.sources.push_back(src[k]);
  }
  return out;
}

std::optional<ConvexPoly> intersection_polygon(const RBox2& g, const RBox2& d) {
  auto traced = intersection_polygon_traced(g, d);
  if (!traced) return std::nullopt;
  return std::move(traced->polygon);
}

OverlapResult rotated_iou(const RBox2& g, const RBox2& d) {
  OverlapResult r;
  if (auto traced = intersection_polygon_traced(g, d)) {
    r.intersection_area = shoelace_area(traced->polygon);
    r.vertex_provenance = std::move(traced->sources);
  }
  r.union_area = g.area() + d.area() - r.intersection_area;
  r.iou = finish_iou(r.intersection_area, r.union_area);
  return r;
}

OverlapResult iou_3d(const Box3& g, const Box3& d) {
  OverlapResult footprint = rotated_iou(g.bev(), d.bev());
  const double h_overlap = std::max(0.0, std::min(g.top(), d.top()) - std::max(g.bottom(), d.bottom()));

  OverlapResult r;
  r.intersection_area = footprint.intersection_area * h_overlap;
  r.union_area = g.bev().area() * g.h() + d.bev().area() * d.h() - r.intersection_area;
  r.iou = finish_iou(r.intersection_area, r.union_area);
  r.vertex_provenance = std::move(footprint.vertex_provenance);
  return r;
}

AABox2 enclosing_aabb(const RBox2& g, const RBox2& d) {
  const auto cg = corners(g);
  const auto cd = corners(d);
  double x_min = cg[0].x, x_max = cg[0].x, y_min = cg[0].y, y_max = cg[0].y;
  auto grow = [&](Vec2 p) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  };
  for (Vec2 p : cg) grow(p);
  for (Vec2 p : cd) grow(p);
  return {x_min, y_min, x_max, y_max};
}

TracedHull enclosing_hull_traced(const RBox2& g, const RBox2& d) {
  const auto cg = corners(g);
  const auto cd = corners(d);
  std::array<Vec2, 8> pts;
  std::copy(cg.begin(), cg.end(), pts.begin());
  std::copy(cd.begin(), cd.end(), pts.begin() + 4);

  std::array<int, 8> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    return pts[a].y < pts[b].y;
  });

  // Andrew's monotone chain; non-left turns are popped.
  std::vector<int> hull;
  auto turn = [&](int o, int a, int b) { return cross(pts[a] - pts[o], pts[b] - pts[o]); };
  for (int idx : order) {
    while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), idx) <= 0.0) hull.pop_back();
    hull.push_back(idx);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (hull.size() >= lower && turn(hull[hull.size() - 2], hull.back(), *it) <= 0.0) hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();

  TracedHull out;
  out.corner_ids = hull;
  for (int idx : hull) out.polygon.vertices.push_back(pts[idx]);
  return out;
}

double enclosure_area(const RBox2& g, const RBox2& d, Enclosure kind) {
  if (kind == Enclosure::AxisAligned) {
    return enclosing_aabb(g, d).area();
  }
  return shoelace_area(enclosing_hull_traced(g, d).polygon);
}

double giou(const RBox2& g, const RBox2& d, Enclosure kind) {
  const OverlapResult o = rotated_iou(g, d);
  const double enclosure = enclosure_area(g, d, kind);
  // C >= U holds exactly; clamp the rounding when the hull coincides with the union.
  return o.iou - std::max(0.0, enclosure - o.union_area) / enclosure;
}

double giou_3d(const Box3& g, const Box3& d, Enclosure kind) {
  const OverlapResult o = iou_3d(g, d);
  const double height = std::max(g.top(), d.top()) - std::min(g.bottom(), d.bottom());
  const double enclosure = enclosure_area(g.bev(), d.bev(), kind) * height;
  return o.iou - std::max(0.0, enclosure - o.union_area) / enclosure;
}

}  // namespace rotiou
