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

#include "rotiou/tape.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <stdexcept>

namespace rotiou::ad {
namespace {

TEST(TapeTest, ElementaryRules) {
  Tape tape;
  const Var x = tape.variable(0.7);
  const Var y = tape.variable(-1.3);
  // f = sin(x) * y + x / y - cos(y) * 2 + 3
  const Var f = sin(x) * y + x / y - cos(y) * 2.0 + 3.0;
  const double xv = 0.7, yv = -1.3;
  EXPECT_DOUBLE_EQ(f.value(), std::sin(xv) * yv + xv / yv - std::cos(yv) * 2.0 + 3.0);

  const auto adj = tape.backward(f);
  EXPECT_NEAR(adj[x.id()], std::cos(xv) * yv + 1.0 / yv, 1e-15);
  EXPECT_NEAR(adj[y.id()], std::sin(xv) - xv / (yv * yv) + 2.0 * std::sin(yv), 1e-15);
}

TEST(TapeTest, SharedSubexpressionAccumulates) {
  Tape tape;
  const Var x = tape.variable(3.0);
  const Var sq = x * x;
  const Var f = sq * x - (-x) + (2.0 - x) * 4.0 / 2.0;
  EXPECT_DOUBLE_EQ(f.value(), 27.0 + 3.0 + (-1.0) * 2.0);
  EXPECT_DOUBLE_EQ(tape.backward(f)[x.id()], 27.0 + 1.0 - 2.0);
}

TEST(TapeTest, ParentsPrecedeChildren) {
  Tape tape;
  const Var a = tape.variable(1.0);
  const Var b = tape.constant(2.0);
  const Var c = a * b + a;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    for (std::size_t p : tape.parents(i)) EXPECT_LT(p, i);
  }
  EXPECT_EQ(tape.kind(a.id()), OpKind::Leaf);
  EXPECT_EQ(tape.kind(b.id()), OpKind::Constant);
  EXPECT_EQ(tape.kind(c.id()), OpKind::Add);
  EXPECT_DOUBLE_EQ(tape.backward(c)[b.id()], 1.0);
}

TEST(TapeTest, SelectRoutesToLowestIndexOnTies) {
  Tape tape;
  const std::array<Var, 4> v{tape.variable(2.0), tape.variable(5.0), tape.variable(5.0), tape.variable(-1.0)};
  const Var hi = select_max(v);
  const Var lo = select_min(v);
  EXPECT_EQ(hi.value(), 5.0);
  EXPECT_EQ(lo.value(), -1.0);
  const auto adj = tape.backward(hi);
  EXPECT_EQ(adj[v[1].id()], 1.0);
  EXPECT_EQ(adj[v[2].id()], 0.0);
  EXPECT_EQ(tape.branches(), (std::vector<int>{1, 3}));
}

TEST(TapeTest, ClampBlocksAdjointWhenActive) {
  Tape tape;
  const Var x = tape.variable(-0.5);
  const Var y = tape.variable(0.5);
  const Var cx = clamp_below(x, 0.0);
  const Var cy = clamp_below(y, 0.0);
  EXPECT_EQ(cx.value(), 0.0);
  EXPECT_EQ(tape.backward(cx)[x.id()], 0.0);
  EXPECT_EQ(tape.backward(cy)[y.id()], 1.0);
  const Var z = clamp_above(y * 4.0, 1.0);
  EXPECT_EQ(z.value(), 1.0);
  EXPECT_EQ(tape.backward(z)[y.id()], 0.0);
}

TEST(TapeTest, RejectsForeignOperands) {
  Tape a;
  Tape b;
  const Var x = a.variable(1.0);
  const Var y = b.variable(1.0);
  EXPECT_THROW(x + y, std::invalid_argument);
  EXPECT_THROW(Var{} * 2.0, std::invalid_argument);
  EXPECT_THROW(b.backward(x), std::invalid_argument);
}

}  // namespace
}  // namespace rotiou::ad
