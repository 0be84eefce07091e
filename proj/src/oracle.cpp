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

#include "rotiou/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace rotiou::oracle {

namespace {

struct Pt {
  double x, y;
};

// Box as center plus two half-axis vectors.
struct Frame {
  Pt c;
  Pt half_u;  // along w
  Pt half_v;  // along l
};

Frame frame_of(const RBox2& b) {
  const double c = std::cos(b.yaw());
  const double s = std::sin(b.yaw());
  return {{b.cx(), b.cy()}, {0.5 * b.w() * c, 0.5 * b.w() * s}, {-0.5 * b.l() * s, 0.5 * b.l() * c}};
}

std::array<Pt, 4> frame_corners(const Frame& f) {
  auto at = [&](double su, double sv) {
    return Pt{f.c.x + su * f.half_u.x + sv * f.half_v.x, f.c.y + su * f.half_u.y + sv * f.half_v.y};
  };
  return {at(1, 1), at(-1, 1), at(-1, -1), at(1, -1)};
}

// Strict interior-or-boundary test by projection onto the half axes.
bool inside(const Frame& f, double x, double y) {
  const double dx = x - f.c.x;
  const double dy = y - f.c.y;
  const double pu = (dx * f.half_u.x + dy * f.half_u.y) / (f.half_u.x * f.half_u.x + f.half_u.y * f.half_u.y);
  const double pv = (dx * f.half_v.x + dy * f.half_v.y) / (f.half_v.x * f.half_v.x + f.half_v.y * f.half_v.y);
  return std::abs(pu) <= 1.0 && std::abs(pv) <= 1.0;
}

double polygon_area(const std::vector<Pt>& poly) {
  if (poly.size() < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % poly.size()];
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(sum);
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double sign() { return unit() < 0.5 ? -1.0 : 1.0; }
  int index(int n) { return std::min(n - 1, static_cast<int>(unit() * n)); }

 private:
  std::mt19937_64 engine_;
};

void validate(const PairGenSpec& s) {
  auto ordered = [](double lo, double hi) { return std::isfinite(lo) && std::isfinite(hi) && lo <= hi; };
  if (!ordered(s.center_min, s.center_max) || !ordered(s.size_min, s.size_max) ||
      !ordered(s.yaw_min, s.yaw_max) || !ordered(s.z_min, s.z_max) ||
      !ordered(s.height_min, s.height_max)) {
    throw std::domain_error("PairGenSpec: every range needs finite min <= max");
  }
  if (!(s.size_min > 0.0) || !(s.height_min > 0.0)) {
    throw std::domain_error("PairGenSpec: sizes must be positive");
  }
  double total = 0.0;
  for (double w : s.regime_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::domain_error("PairGenSpec: regime weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::domain_error("PairGenSpec: at least one regime weight must be positive");
  }
}

Regime pick_regime(const PairGenSpec& s, Rng& rng) {
  double total = 0.0;
  for (double w : s.regime_weights) total += w;
  double x = rng.uniform(0.0, total);
  for (std::size_t i = 0; i < kAllRegimes.size(); ++i) {
    if (x < s.regime_weights[i]) return kAllRegimes[i];
    x -= s.regime_weights[i];
  }
  for (std::size_t i = kAllRegimes.size(); i-- > 0;) {
    if (s.regime_weights[i] > 0.0) return kAllRegimes[i];
  }
  return Regime::Overlap;
}

// Maps a point from g's local frame to the world.
Pt to_world(const RBox2& g, double u, double v) {
  const double c = std::cos(g.yaw());
  const double s = std::sin(g.yaw());
  return {g.cx() + c * u - s * v, g.cy() + s * u + c * v};
}

RBox2 random_box(const PairGenSpec& s, Rng& rng) {
  const double cx = rng.uniform(s.center_min, s.center_max);
  const double cy = rng.uniform(s.center_min, s.center_max);
  const double w = rng.uniform(s.size_min, s.size_max);
  const double l = rng.uniform(s.size_min, s.size_max);
  const double yaw = rng.uniform(s.yaw_min, s.yaw_max);
  return {cx, cy, w, l, yaw};
}

RBox2 make_overlap(const PairGenSpec& s, const RBox2& g, Rng& rng) {
  const double u = rng.uniform(-0.95, 0.95) * 0.5 * g.w();
  const double v = rng.uniform(-0.95, 0.95) * 0.5 * g.l();
  const Pt c = to_world(g, u, v);
  return {c.x, c.y, rng.uniform(s.size_min, s.size_max), rng.uniform(s.size_min, s.size_max),
          rng.uniform(s.yaw_min, s.yaw_max)};
}

RBox2 make_nested(const RBox2& outer, Rng& rng) {
  const double r_max = 0.5 * std::min(outer.w(), outer.l());
  const double r = rng.uniform(0.2, 0.8) * r_max;
  const double phi = rng.uniform(0.25, 1.32);
  const double u = rng.uniform(-0.9, 0.9) * (0.5 * outer.w() - r);
  const double v = rng.uniform(-0.9, 0.9) * (0.5 * outer.l() - r);
  const Pt c = to_world(outer, u, v);
  return {c.x, c.y, 2.0 * r * std::cos(phi), 2.0 * r * std::sin(phi),
          rng.uniform(-std::numbers::pi, std::numbers::pi)};
}

RBox2 make_touch(const PairGenSpec& s, const RBox2& g, Rng& rng) {
  const int side = rng.index(4);
  const double side_angle = side * 0.5 * std::numbers::pi;
  const Pt n{std::cos(side_angle), std::sin(side_angle)};
  const Pt t{-n.y, n.x};
  const double e_n = side % 2 == 0 ? 0.5 * g.w() : 0.5 * g.l();
  const double e_t = side % 2 == 0 ? 0.5 * g.l() : 0.5 * g.w();
  const double w = rng.uniform(s.size_min, s.size_max);
  const double l = rng.uniform(s.size_min, s.size_max);

  double rel_yaw = side_angle;
  Pt local;
  if (rng.unit() < 0.5) {
    // Edge on edge: d's w axis along n, flush against g's side.
    const double tau = rng.uniform(-0.9, 0.9) * (e_t + 0.5 * l);
    local = {n.x * (e_n + 0.5 * w) + t.x * tau, n.y * (e_n + 0.5 * w) + t.y * tau};
  } else {
    // Corner on edge: rotate d off-axis and rest its innermost corner on g's side.
    rel_yaw += rng.uniform(0.1, 0.5 * std::numbers::pi - 0.1);
    const Frame f = frame_of(RBox2(0.0, 0.0, w, l, rel_yaw));
    const auto cs = frame_corners(f);
    Pt inner = cs[0];
    double best = inner.x * n.x + inner.y * n.y;
    for (const Pt& p : cs) {
      const double proj = p.x * n.x + p.y * n.y;
      if (proj < best) {
        best = proj;
        inner = p;
      }
    }
    const double tau = rng.uniform(-0.9, 0.9) * e_t;
    local = {n.x * e_n + t.x * tau - inner.x, n.y * e_n + t.y * tau - inner.y};
  }
  const Pt c = to_world(g, local.x, local.y);
  return {c.x, c.y, w, l, g.yaw() + rel_yaw};
}

RBox2 make_disjoint(const PairGenSpec& s, const RBox2& g, Rng& rng) {
  const double w = rng.uniform(s.size_min, s.size_max);
  const double l = rng.uniform(s.size_min, s.size_max);
  const double r_g = 0.5 * std::hypot(g.w(), g.l());
  const double r_d = 0.5 * std::hypot(w, l);
  const double gap = rng.uniform(0.05, 1.0) * s.size_max;
  const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double dist = r_g + r_d + gap;
  return {g.cx() + dist * std::cos(theta), g.cy() + dist * std::sin(theta), w, l,
          rng.uniform(s.yaw_min, s.yaw_max)};
}

BoxPair generate(const PairGenSpec& spec, Rng& rng) {
  validate(spec);
  const Regime regime = pick_regime(spec, rng);
  const RBox2 g = random_box(spec, rng);
  switch (regime) {
    case Regime::Overlap:
      return {g, make_overlap(spec, g, rng), regime};
    case Regime::Touch:
      return {g, make_touch(spec, g, rng), regime};
    case Regime::Disjoint:
      return {g, make_disjoint(spec, g, rng), regime};
    case Regime::Nested: {
      const RBox2 inner = make_nested(g, rng);
      if (rng.unit() < 0.5) return {g, inner, regime};
      return {inner, g, regime};
    }
  }
  throw std::logic_error("unhandled regime");
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Overlap:
      return "overlap";
    case Regime::Touch:
      return "touch";
    case Regime::Disjoint:
      return "disjoint";
    case Regime::Nested:
      return "nested";
  }
  return "?";
}

McEstimate mc_iou(const RBox2& g, const RBox2& d, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) {
    throw std::invalid_argument("mc_iou needs at least one sample");
  }
  const Frame fg = frame_of(g);
  const Frame fd = frame_of(d);
  double x_lo = fg.c.x, x_hi = fg.c.x, y_lo = fg.c.y, y_hi = fg.c.y;
  for (const auto& cs : {frame_corners(fg), frame_corners(fd)}) {
    for (const Pt& p : cs) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
    }
  }
  const double window = (x_hi - x_lo) * (y_hi - y_lo);

  Rng rng(seed);
  std::uint64_t n_union = 0;
  std::uint64_t n_both = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double x = rng.uniform(x_lo, x_hi);
    const double y = rng.uniform(y_lo, y_hi);
    const bool in_g = inside(fg, x, y);
    const bool in_d = inside(fd, x, y);
    n_union += (in_g || in_d) ? 1 : 0;
    n_both += (in_g && in_d) ? 1 : 0;
  }

  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  const double n = static_cast<double>(samples);
  const double p_area = static_cast<double>(n_both) / n;
  est.intersection_area = p_area * window;
  est.intersection_area_std_error = std::sqrt(p_area * (1.0 - p_area) / n) * window;
  if (n_union > 0) {
    const double nu = static_cast<double>(n_union);
    const double p = static_cast<double>(n_both) / nu;
    est.estimate = p;
    est.std_error = std::sqrt(p * (1.0 - p) / nu);
  }
  return est;
}

double clip_iou(const RBox2& g, const RBox2& d) {
  // Work relative to g's center to keep the shoelace sum well conditioned.
  const Pt origin{g.cx(), g.cy()};
  auto shift = [&](const std::array<Pt, 4>& cs) {
    std::vector<Pt> out;
    for (const Pt& p : cs) out.push_back({p.x - origin.x, p.y - origin.y});
    return out;
  };
  std::vector<Pt> subject = shift(frame_corners(frame_of(g)));
  const std::vector<Pt> clip = shift(frame_corners(frame_of(d)));

  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Pt a = clip[e];
    const Pt b = clip[(e + 1) % clip.size()];
    auto side = [&](const Pt& p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };

    std::vector<Pt> kept;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Pt cur = subject[i];
      const Pt nxt = subject[(i + 1) % subject.size()];
      const double sc = side(cur);
      const double sn = side(nxt);
      if (sc >= 0.0) kept.push_back(cur);
      if ((sc >= 0.0) != (sn >= 0.0)) {
        const double t = sc / (sc - sn);
        kept.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
      }
    }
    subject = std::move(kept);
  }

  const double inter = polygon_area(subject);
  const double uni = g.w() * g.l() + d.w() * d.l() - inter;
  return std::min(1.0, inter / uni);
}

BoxPair random_pair(const PairGenSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return generate(spec, rng);
}

Box3Pair random_pair_3d(const PairGenSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const BoxPair p = generate(spec, rng);
  const double hg = rng.uniform(spec.height_min, spec.height_max);
  const double hd = rng.uniform(spec.height_min, spec.height_max);
  const double zg = rng.uniform(spec.z_min, spec.z_max);
  double zd = rng.uniform(spec.z_min, spec.z_max);
  if (p.regime == Regime::Overlap || p.regime == Regime::Nested) {
    zd = zg + rng.uniform(-0.8, 0.8) * 0.5 * (hg + hd);
  }
  return {Box3(p.g.cx(), p.g.cy(), zg, p.g.w(), p.g.l(), hg, p.g.yaw()),
          Box3(p.d.cx(), p.d.cy(), zd, p.d.w(), p.d.l(), hd, p.d.yaw()), p.regime};
}

}  // namespace rotiou::oracle
