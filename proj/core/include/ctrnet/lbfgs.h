// Copyright 2026 The ctrnet Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ctrnet {

struct LbfgsOptions {
  std::size_t memory = 10;
  // Stop once the relative objective decrease of an accepted step drops below this.
  double tolerance = 1e-5;
  std::size_t max_iterations = 200;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  std::size_t max_backtracks = 60;

  void validate() const;
};

struct LbfgsReport {
  std::size_t iterations = 0;
  double objective = 0.0;
  // Objective at the start and after every accepted step.
  std::vector<double> trace;
  bool converged = false;
};

// Returns f(x) and writes the gradient into `grad` (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Limited-memory BFGS with the two-loop recursion and Armijo backtracking.
// `x` holds the starting point on entry and the final iterate on return.
LbfgsReport minimize_lbfgs(const Objective& objective, std::vector<double>& x,
                           const LbfgsOptions& options);

}  // namespace ctrnet
