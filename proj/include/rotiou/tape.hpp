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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rotiou::ad {

enum class OpKind : std::uint8_t {
  Leaf,
  Constant,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Sin,
  Cos,
  Select,  // min/max: the whole adjoint goes to the chosen argument
  Custom,  // primitive with a hand-written local Jacobian
};

class Tape;

/// Scalar recorded on a Tape: a value plus the index of its node.
class Var {
 public:
  Var() = default;

  double value() const { return value_; }
  std::size_t id() const { return id_; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id, double value) : tape_(tape), id_(id), value_(value) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
  double value_ = 0.0;
};

/// Local derivative of a new node with respect to one of its parents.
struct Partial {
  Var parent;
  double derivative;
};

/// Append-only record of a computation. Parents always precede children,
/// so a single reverse sweep yields every adjoint.
///
/// A tape and its Vars belong to one thread at a time. Vars keep a pointer
/// to their tape, so tapes are neither copyable nor movable.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double value);
  Var constant(double value);

  /// Records a node. Every parent must live on this tape.
  Var push(OpKind kind, double value, std::span<const Partial> partials);

  std::size_t size() const { return nodes_.size(); }
  OpKind kind(std::size_t id) const { return nodes_.at(id).kind; }
  std::span<const std::size_t> parents(std::size_t id) const;

  /// Adjoints d(output)/d(node) for every node, scaled by `seed`.
  std::vector<double> backward(const Var& output, double seed = 1.0) const;

  /// Discrete choices taken while recording (min/max arguments, clamps).
  void record_branch(int choice) { branches_.push_back(choice); }
  const std::vector<int>& branches() const { return branches_; }

 private:
  struct Node {
    OpKind kind;
    std::size_t first;  // offset into parents_/derivatives_
    std::size_t count;
  };

  std::vector<Node> nodes_;
  std::vector<std::size_t> parents_;
  std::vector<double> derivatives_;
  std::vector<int> branches_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

Var operator+(const Var& a, double b);
Var operator+(double a, const Var& b);
Var operator-(const Var& a, double b);
Var operator-(double a, const Var& b);
Var operator*(const Var& a, double b);
Var operator*(double a, const Var& b);
Var operator/(const Var& a, double b);

Var sin(const Var& a);
Var cos(const Var& a);

/// Smallest / largest argument; ties go to the lowest index. The chosen
/// index is recorded as a branch on the tape.
Var select_min(std::span<const Var> args);
Var select_max(std::span<const Var> args);

/// max(a, floor) where `floor` is a constant.
Var clamp_below(const Var& a, double floor);
/// min(a, ceiling) where `ceiling` is a constant.
Var clamp_above(const Var& a, double ceiling);

}  // namespace rotiou::ad
