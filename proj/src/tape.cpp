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

#include <array>
#include <cmath>
#include <stdexcept>

namespace rotiou::ad {

namespace {

Tape& common_tape(const Var& a, const Var& b) {
  if (a.tape() == nullptr || a.tape() != b.tape()) {
    throw std::invalid_argument("operands must live on the same tape");
  }
  return *a.tape();
}

Tape& tape_of(const Var& a) {
  if (a.tape() == nullptr) {
    throw std::invalid_argument("operand is not attached to a tape");
  }
  return *a.tape();
}

Var unary(OpKind kind, const Var& a, double value, double da) {
  const std::array<Partial, 1> p{{{a, da}}};
  return tape_of(a).push(kind, value, p);
}

Var binary(OpKind kind, const Var& a, const Var& b, double value, double da, double db) {
  const std::array<Partial, 2> p{{{a, da}, {b, db}}};
  return common_tape(a, b).push(kind, value, p);
}

Var select(std::span<const Var> args, bool want_max) {
  if (args.empty()) {
    throw std::invalid_argument("select needs at least one argument");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const bool better = want_max ? args[i].value() > args[best].value()
                                 : args[i].value() < args[best].value();
    if (better) best = i;
  }
  Tape& tape = tape_of(args[best]);
  for (const Var& v : args) {
    if (v.tape() != &tape) {
      throw std::invalid_argument("operands must live on the same tape");
    }
  }
  tape.record_branch(static_cast<int>(best));
  return unary(OpKind::Select, args[best], args[best].value(), 1.0);
}

}  // namespace

Var Tape::variable(double value) {
  nodes_.push_back({OpKind::Leaf, parents_.size(), 0});
  return {this, nodes_.size() - 1, value};
}

Var Tape::constant(double value) {
  nodes_.push_back({OpKind::Constant, parents_.size(), 0});
  return {this, nodes_.size() - 1, value};
}

Var Tape::push(OpKind kind, double value, std::span<const Partial> partials) {
  const std::size_t first = parents_.size();
  for (const Partial& p : partials) {
    if (p.parent.tape() != this || p.parent.id() >= nodes_.size()) {
      throw std::invalid_argument("parent does not belong to this tape");
    }
    parents_.push_back(p.parent.id());
    derivatives_.push_back(p.derivative);
  }
  nodes_.push_back({kind, first, partials.size()});
  return {this, nodes_.size() - 1, value};
}

std::span<const std::size_t> Tape::parents(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return {parents_.data() + n.first, n.count};
}

std::vector<double> Tape::backward(const Var& output, double seed) const {
  if (output.tape() != this) {
    throw std::invalid_argument("output does not belong to this tape");
  }
  std::vector<double> adjoint(nodes_.size(), 0.0);
  adjoint[output.id()] = seed;
  for (std::size_t i = output.id() + 1; i-- > 0;) {
    const double a = adjoint[i];
    if (a == 0.0) continue;
    const Node& n = nodes_[i];
    for (std::size_t k = 0; k < n.count; ++k) {
      adjoint[parents_[n.first + k]] += a * derivatives_[n.first + k];
    }
  }
  return adjoint;
}

Var operator+(const Var& a, const Var& b) {
  return binary(OpKind::Add, a, b, a.value() + b.value(), 1.0, 1.0);
}
Var operator-(const Var& a, const Var& b) {
  return binary(OpKind::Sub, a, b, a.value() - b.value(), 1.0, -1.0);
}
Var operator*(const Var& a, const Var& b) {
  return binary(OpKind::Mul, a, b, a.value() * b.value(), b.value(), a.value());
}
Var operator/(const Var& a, const Var& b) {
  const double q = a.value() / b.value();
  return binary(OpKind::Div, a, b, q, 1.0 / b.value(), -q / b.value());
}
Var operator-(const Var& a) { return unary(OpKind::Neg, a, -a.value(), -1.0); }

Var operator+(const Var& a, double b) { return unary(OpKind::Add, a, a.value() + b, 1.0); }
Var operator+(double a, const Var& b) { return unary(OpKind::Add, b, a + b.value(), 1.0); }
Var operator-(const Var& a, double b) { return unary(OpKind::Sub, a, a.value() - b, 1.0); }
Var operator-(double a, const Var& b) { return unary(OpKind::Sub, b, a - b.value(), -1.0); }
Var operator*(const Var& a, double b) { return unary(OpKind::Mul, a, a.value() * b, b); }
Var operator*(double a, const Var& b) { return unary(OpKind::Mul, b, a * b.value(), a); }
Var operator/(const Var& a, double b) { return unary(OpKind::Div, a, a.value() / b, 1.0 / b); }

Var sin(const Var& a) { return unary(OpKind::Sin, a, std::sin(a.value()), std::cos(a.value())); }
Var cos(const Var& a) { return unary(OpKind::Cos, a, std::cos(a.value()), -std::sin(a.value())); }

Var select_min(std::span<const Var> args) { return select(args, false); }
Var select_max(std::span<const Var> args) { return select(args, true); }

Var clamp_below(const Var& a, double floor) {
  Tape& tape = tape_of(a);
  if (a.value() < floor) {
    tape.record_branch(1);
    return tape.constant(floor);
  }
  tape.record_branch(0);
  return unary(OpKind::Select, a, a.value(), 1.0);
}

Var clamp_above(const Var& a, double ceiling) {
  Tape& tape = tape_of(a);
  if (a.value() > ceiling) {
    tape.record_branch(1);
    return tape.constant(ceiling);
  }
  tape.record_branch(0);
  return unary(OpKind::Select, a, a.value(), 1.0);
}

}  // namespace rotiou::ad
