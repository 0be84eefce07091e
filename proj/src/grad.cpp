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

#include "rotiou/grad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rotiou/overlap.hpp"

namespace rotiou {

using ad::Partial;
using ad::Tape;
using ad::Var;

namespace {

struct TapeBox2 {
  Var cx, cy, w, l, yaw;
};

struct TapeBox3 {
  Var cx, cy, cz, w, l, h, yaw;
  TapeBox2 bev() const { return {cx, cy, w, l, yaw}; }
};

TapeBox2 record(Tape& tape, const RBox2& b) {
  return {tape.variable(b.cx()), tape.variable(b.cy()), tape.variable(b.w()),
          tape.variable(b.l()), tape.variable(b.yaw())};
}

TapeBox3 record(Tape& tape, const Box3& b) {
  return {tape.variable(b.cx()), tape.variable(b.cy()), tape.variable(b.cz()),
          tape.variable(b.w()),  tape.variable(b.l()),  tape.variable(b.h()),
          tape.variable(b.yaw())};
}

BoxGrad2 gradient_of(const std::vector<double>& adj, const TapeBox2& b) {
  return {adj[b.cx.id()], adj[b.cy.id()], adj[b.w.id()], adj[b.l.id()], adj[b.yaw.id()]};
}

BoxGrad3 gradient_of(const std::vector<double>& adj, const TapeBox3& b) {
  return {adj[b.cx.id()], adj[b.cy.id()], adj[b.cz.id()], adj[b.w.id()],
          adj[b.l.id()],  adj[b.h.id()],  adj[b.yaw.id()]};
}

// Same arithmetic as corners() so values agree bit for bit.
std::array<TapePoint, 4> tape_corners(const TapeBox2& b) {
  const Var c = ad::cos(b.yaw);
  const Var s = ad::sin(b.yaw);
  const Var hw = b.w * 0.5;
  const Var hl = b.l * 0.5;
  const Var nhw = -hw;
  const Var nhl = -hl;
  const std::array<Var, 4> u{hw, nhw, nhw, hw};
  const std::array<Var, 4> v{hl, hl, nhl, nhl};

  std::array<TapePoint, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {b.cx + (c * u[i] - s * v[i]), b.cy + (s * u[i] + c * v[i])};
  }
  return out;
}

Var tape_cross(const TapePoint& a, const TapePoint& b) { return a.x * b.y - a.y * b.x; }

TapePoint tape_sub(const TapePoint& a, const TapePoint& b) { return {a.x - b.x, a.y - b.y}; }

// Intersection area rebuilt on the tape from the frozen vertex provenance.
Var tape_intersection_area(Tape& tape, const std::array<TapePoint, 4>& cg,
                           const std::array<TapePoint, 4>& cd,
                           const std::vector<VertexSource>& sources) {
  if (sources.size() < 3) {
    return tape.constant(0.0);
  }
  std::vector<TapePoint> verts;
  verts.reserve(sources.size());
  for (const VertexSource& s : sources) {
    if (s.kind == VertexSource::Kind::EdgeCrossing) {
      verts.push_back(crossing_point(tape, cg[s.a], cg[(s.a + 1) % 4], cd[s.b], cd[(s.b + 1) % 4]));
    } else {
      verts.push_back(s.a == 0 ? cg[s.b] : cd[s.b]);
    }
  }
  Var twice = tape_cross(tape_sub(verts[1], verts[0]), tape_sub(verts[2], verts[0]));
  for (std::size_t i = 2; i + 1 < verts.size(); ++i) {
    twice = twice + tape_cross(tape_sub(verts[i], verts[0]), tape_sub(verts[i + 1], verts[0]));
  }
  return twice.value() < 0.0 ? (-twice) * 0.5 : twice * 0.5;
}

struct AreaTerms {
  Var intersection;
  Var union_area;
  Var iou;
};

AreaTerms tape_overlap_2d(Tape& tape, const TapeBox2& g, const TapeBox2& d,
                          const std::vector<VertexSource>& sources,
                          const std::array<TapePoint, 4>& cg, const std::array<TapePoint, 4>& cd) {
  const Var inter = tape_intersection_area(tape, cg, cd, sources);
  const Var uni = g.w * g.l + d.w * d.l - inter;
  return {inter, uni, ad::clamp_above(inter / uni, 1.0)};
}

Var tape_aabb_area(const std::array<TapePoint, 4>& cg, const std::array<TapePoint, 4>& cd) {
  std::array<Var, 8> xs;
  std::array<Var, 8> ys;
  for (std::size_t i = 0; i < 4; ++i) {
    xs[i] = cg[i].x;
    ys[i] = cg[i].y;
    xs[i + 4] = cd[i].x;
    ys[i + 4] = cd[i].y;
  }
  return (ad::select_max(xs) - ad::select_min(xs)) * (ad::select_max(ys) - ad::select_min(ys));
}

// Triangle fan over the hull corners, in the order the plain hull uses.
Var tape_hull_area(const std::array<TapePoint, 4>& cg, const std::array<TapePoint, 4>& cd,
                   const std::vector<int>& ids) {
  auto at = [&](int id) -> const TapePoint& { return id < 4 ? cg[id] : cd[id - 4]; };
  const TapePoint& v0 = at(ids[0]);
  Var twice = tape_cross(tape_sub(at(ids[1]), v0), tape_sub(at(ids[2]), v0));
  for (std::size_t i = 2; i + 1 < ids.size(); ++i) {
    twice = twice + tape_cross(tape_sub(at(ids[i]), v0), tape_sub(at(ids[i + 1]), v0));
  }
  return twice.value() < 0.0 ? (-twice) * 0.5 : twice * 0.5;
}

// A polygon's starting vertex is arbitrary; canonicalize the cycle.
void append_cycle(std::vector<int>& sig, std::vector<int> cycle) {
  if (!cycle.empty()) {
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  }
  sig.insert(sig.end(), cycle.begin(), cycle.end());
  sig.push_back(-1);
}

std::vector<int> make_signature(const std::vector<VertexSource>& sources, const Tape& tape,
                                const std::vector<int>& hull_ids = {}) {
  std::vector<int> sig;
  std::vector<int> codes;
  for (const VertexSource& s : sources) codes.push_back(s.code());
  append_cycle(sig, std::move(codes));
  append_cycle(sig, hull_ids);
  sig.insert(sig.end(), tape.branches().begin(), tape.branches().end());
  return sig;
}

// Enclosure area on the tape plus the hull vertex ids it was built from
// (empty for the axis-aligned enclosure, whose choices live on the tape).
struct TapeEnclosure {
  Var area;
  std::vector<int> hull_ids;
};

TapeEnclosure tape_enclosure(const RBox2& g, const RBox2& d, Enclosure kind,
                             const std::array<TapePoint, 4>& cg, const std::array<TapePoint, 4>& cd) {
  if (kind == Enclosure::AxisAligned) {
    return {tape_aabb_area(cg, cd), {}};
  }
  std::vector<int> ids = enclosing_hull_traced(g, d).corner_ids;
  return {tape_hull_area(cg, cd, ids), std::move(ids)};
}

std::vector<VertexSource> frozen_sources(const RBox2& g, const RBox2& d) {
  auto traced = intersection_polygon_traced(g, d);
  return traced ? std::move(traced->sources) : std::vector<VertexSource>{};
}

template <typename Grad, typename TapeBox>
DiffResult<Grad> finish(Tape& tape, const Var& out, const TapeBox& g, const TapeBox& d,
                        const std::vector<VertexSource>& sources,
                        const std::vector<int>& hull_ids = {}) {
  const std::vector<double> adj = tape.backward(out);
  DiffResult<Grad> r;
  r.value = out.value();
  r.grad_d = gradient_of(adj, d);
  r.grad_g = gradient_of(adj, g);
  r.signature = make_signature(sources, tape, hull_ids);
  return r;
}

// Height overlap and enclosing height of two cuboids.
struct HeightTerms {
  Var overlap;
  Var extent;
};

HeightTerms tape_heights(const TapeBox3& g, const TapeBox3& d) {
  const std::array<Var, 2> tops{g.cz + g.h * 0.5, d.cz + d.h * 0.5};
  const std::array<Var, 2> bottoms{g.cz - g.h * 0.5, d.cz - d.h * 0.5};
  const Var overlap = ad::clamp_below(ad::select_min(tops) - ad::select_max(bottoms), 0.0);
  const Var extent = ad::select_max(tops) - ad::select_min(bottoms);
  return {overlap, extent};
}

AreaTerms tape_overlap_3d(Tape& tape, const TapeBox3& g, const TapeBox3& d,
                          const std::vector<VertexSource>& sources,
                          const std::array<TapePoint, 4>& cg, const std::array<TapePoint, 4>& cd,
                          const Var& h_overlap) {
  const Var inter = tape_intersection_area(tape, cg, cd, sources) * h_overlap;
  const Var uni = (g.w * g.l) * g.h + (d.w * d.l) * d.h - inter;
  return {inter, uni, ad::clamp_above(inter / uni, 1.0)};
}

}  // namespace

TapePoint crossing_point(Tape& tape, const TapePoint& p1, const TapePoint& p2, const TapePoint& q1,
                         const TapePoint& q2) {
  const Vec2 a1{p1.x.value(), p1.y.value()};
  const Vec2 a2{p2.x.value(), p2.y.value()};
  const Vec2 b1{q1.x.value(), q1.y.value()};
  const Vec2 b2{q2.x.value(), q2.y.value()};
  const Vec2 r = a2 - a1;
  const Vec2 s = b2 - b1;
  const double det = cross(r, s);
  if (det == 0.0) {
    throw std::domain_error("crossing_point: parallel lines");
  }
  const double t = cross(b1 - a1, s) / det;
  const Vec2 x = a1 + r * t;

  // Partials of the two residuals with respect to their own endpoints.
  const Vec2 to_p2 = x - a2;
  const Vec2 to_p1 = x - a1;
  const Vec2 to_q2 = x - b2;
  const Vec2 to_q1 = x - b1;
  const std::array<double, 4> dres_p{to_p2.y, -to_p2.x, -to_p1.y, to_p1.x};
  const std::array<double, 4> dres_q{to_q2.y, -to_q2.x, -to_q1.y, to_q1.x};

  const std::array<Var, 4> pv{p1.x, p1.y, p2.x, p2.y};
  const std::array<Var, 4> qv{q1.x, q1.y, q2.x, q2.y};
  std::array<Partial, 8> dx;
  std::array<Partial, 8> dy;
  for (std::size_t k = 0; k < 4; ++k) {
    dx[k] = {pv[k], s.x * dres_p[k] / det};
    dy[k] = {pv[k], s.y * dres_p[k] / det};
    dx[k + 4] = {qv[k], -r.x * dres_q[k] / det};
    dy[k + 4] = {qv[k], -r.y * dres_q[k] / det};
  }
  return {tape.push(ad::OpKind::Custom, x.x, dx), tape.push(ad::OpKind::Custom, x.y, dy)};
}

DiffResult2 diff_rotated_iou(const RBox2& g, const RBox2& d) {
  const auto sources = frozen_sources(g, d);
  Tape tape;
  const TapeBox2 tg = record(tape, g);
  const TapeBox2 td = record(tape, d);
  const auto cg = tape_corners(tg);
  const auto cd = tape_corners(td);
  const AreaTerms terms = tape_overlap_2d(tape, tg, td, sources, cg, cd);
  return finish<BoxGrad2>(tape, terms.iou, tg, td, sources);
}

DiffResult2 diff_giou(const RBox2& g, const RBox2& d, Enclosure kind) {
  const auto sources = frozen_sources(g, d);
  Tape tape;
  const TapeBox2 tg = record(tape, g);
  const TapeBox2 td = record(tape, d);
  const auto cg = tape_corners(tg);
  const auto cd = tape_corners(td);
  const AreaTerms terms = tape_overlap_2d(tape, tg, td, sources, cg, cd);
  const TapeEnclosure enc = tape_enclosure(g, d, kind, cg, cd);
  const Var out = terms.iou - clamp_below(enc.area - terms.union_area, 0.0) / enc.area;
  return finish<BoxGrad2>(tape, out, tg, td, sources, enc.hull_ids);
}

DiffResult3 diff_iou_3d(const Box3& g, const Box3& d) {
  const auto sources = frozen_sources(g.bev(), d.bev());
  Tape tape;
  const TapeBox3 tg = record(tape, g);
  const TapeBox3 td = record(tape, d);
  const auto cg = tape_corners(tg.bev());
  const auto cd = tape_corners(td.bev());
  const HeightTerms heights = tape_heights(tg, td);
  const AreaTerms terms = tape_overlap_3d(tape, tg, td, sources, cg, cd, heights.overlap);
  return finish<BoxGrad3>(tape, terms.iou, tg, td, sources);
}

DiffResult3 diff_giou_3d(const Box3& g, const Box3& d, Enclosure kind) {
  const auto sources = frozen_sources(g.bev(), d.bev());
  Tape tape;
  const TapeBox3 tg = record(tape, g);
  const TapeBox3 td = record(tape, d);
  const auto cg = tape_corners(tg.bev());
  const auto cd = tape_corners(td.bev());
  const HeightTerms heights = tape_heights(tg, td);
  const AreaTerms terms = tape_overlap_3d(tape, tg, td, sources, cg, cd, heights.overlap);
  const TapeEnclosure enc = tape_enclosure(g.bev(), d.bev(), kind, cg, cd);
  const Var enclosure = enc.area * heights.extent;
  const Var out = terms.iou - clamp_below(enclosure - terms.union_area, 0.0) / enclosure;
  return finish<BoxGrad3>(tape, out, tg, td, sources, enc.hull_ids);
}

// ---------------------------------------------------------------------------

FdReport finite_diff_check(const ProbeFn& f, std::span<const double> point, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite_diff_check: step must be positive");
  }
  const Probe base = f(point);
  if (base.gradient.size() != point.size()) {
    throw std::invalid_argument("finite_diff_check: gradient size does not match point");
  }

  FdReport report;
  report.analytic = base.gradient;
  report.numeric.resize(point.size());
  report.rel_error.resize(point.size());

  std::vector<double> x(point.begin(), point.end());
  auto eval_at = [&](std::size_t i, double delta) {
    x[i] = point[i] + delta;
    Probe p = f(x);
    x[i] = point[i];
    return p;
  };

  for (std::size_t i = 0; i < point.size(); ++i) {
    if (eval_at(i, 10.0 * step).signature != base.signature ||
        eval_at(i, -10.0 * step).signature != base.signature) {
      report.status = FdStatus::NonSmooth;
      return report;
    }
  }

  for (std::size_t i = 0; i < point.size(); ++i) {
    const Probe plus = eval_at(i, step);
    const Probe minus = eval_at(i, -step);
    if (plus.signature != base.signature || minus.signature != base.signature) {
      report.status = FdStatus::NonSmooth;
      return report;
    }
    const double numeric = (plus.value - minus.value) / (2.0 * step);
    const double analytic = base.gradient[i];
    const double scale = std::max({std::abs(analytic), std::abs(numeric), kGradScaleFloor});
    report.numeric[i] = numeric;
    report.rel_error[i] = std::abs(analytic - numeric) / scale;
    report.max_rel_error = std::max(report.max_rel_error, report.rel_error[i]);
  }
  return report;
}

namespace {

template <typename Result>
Probe to_probe(const Result& r) {
  Probe p;
  p.value = r.value;
  const auto gd = r.grad_d.as_array();
  const auto gg = r.grad_g.as_array();
  p.gradient.assign(gd.begin(), gd.end());
  p.gradient.insert(p.gradient.end(), gg.begin(), gg.end());
  p.signature = r.signature;
  return p;
}

}  // namespace

Probe probe_pair_2d(Metric metric, std::span<const double> params, Enclosure kind) {
  if (params.size() != 2 * RBox2::kNumParams) {
    throw std::invalid_argument("probe_pair_2d expects 10 parameters");
  }
  const RBox2 d(params[0], params[1], params[2], params[3], params[4]);
  const RBox2 g(params[5], params[6], params[7], params[8], params[9]);
  return to_probe(metric == Metric::IoU ? diff_rotated_iou(g, d) : diff_giou(g, d, kind));
}

Probe probe_pair_3d(Metric metric, std::span<const double> params, Enclosure kind) {
  if (params.size() != 2 * Box3::kNumParams) {
    throw std::invalid_argument("probe_pair_3d expects 14 parameters");
  }
  Box3::Params pd;
  Box3::Params pg;
  std::copy_n(params.begin(), 7, pd.begin());
  std::copy_n(params.begin() + 7, 7, pg.begin());
  const Box3 d(pd);
  const Box3 g(pg);
  return to_probe(metric == Metric::IoU ? diff_iou_3d(g, d) : diff_giou_3d(g, d, kind));
}

}  // namespace rotiou
