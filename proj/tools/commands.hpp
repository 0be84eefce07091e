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

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotiou::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // tolerance or input validation
inline constexpr int kExitUsage = 2;

// Bad arguments that only show up after parsing, such as a malformed box.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IouArgs {
  std::string mode = "rot";
  std::string g, d;
  std::string enclosure = "hull";
  bool json = false;
};

struct GradCheckArgs {
  int pairs = 100;
  std::uint64_t seed = 0;
  std::string mode = "rot";
  std::string loss = "iou";
  double tolerance = 1e-4;
  bool json = false;
};

struct EvalArgs {
  std::string gt_dir, det_dir;
  std::vector<std::string> classes{"Car"};
  std::string mode = "bev";
  int interp = 11;
  std::string out;
  bool json = false;
};

struct FitArgs {
  std::string loss = "iou";
  std::string init = "overlap";
  int steps = 500;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::string out;
  bool json = false;
};

/// Parses "a,b,c" into exactly `fields` finite numbers. Throws UsageError
/// naming the offending token.
std::vector<double> parse_numbers(const std::string& text, std::size_t fields, const std::string& flag);

int run_iou(const IouArgs& args, std::ostream& out);
int run_grad_check(const GradCheckArgs& args, std::ostream& out);
int run_eval(const EvalArgs& args, std::ostream& out);
int run_fit(const FitArgs& args, std::ostream& out);

}  // namespace rotiou::cli
