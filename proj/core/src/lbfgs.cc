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

#include "ctrnet/lbfgs.h"

#include <cmath>
#include <deque>

#include "ctrnet/error.h"

namespace ctrnet {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct CorrectionPair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// d = -H g from the stored pairs; falls back to a unit-length steepest step.
std::vector<double> search_direction(const std::deque<CorrectionPair>& pairs,
                                     std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  if (pairs.empty()) {
    const double norm = std::sqrt(dot(g, g));
    for (double& v : q) v = -v / norm;
    return q;
  }
  std::vector<double> alpha(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    alpha[k] = pairs[k].rho * dot(pairs[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * pairs[k].y[i];
  }
  const auto& last = pairs.back();
  const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
  for (double& v : q) v *= gamma;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double beta = pairs[k].rho * dot(pairs[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * pairs[k].s[i];
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

void LbfgsOptions::validate() const {
  if (memory < 1) throw ConfigError("L-BFGS memory must be >= 1");
  if (!(tolerance > 0.0)) throw ConfigError("L-BFGS tolerance must be > 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw ConfigError("Armijo constant must be in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("backtracking factor must be in (0,1)");
}

LbfgsReport minimize_lbfgs(const Objective& objective, std::vector<double>& x,
                           const LbfgsOptions& options) {
  options.validate();
  const std::size_t n = x.size();
  std::vector<double> g(n), g_new(n), x_new(n);
  double f = objective(x, g);
  if (!std::isfinite(f)) throw OptimizationError("non-finite objective at iteration 0");

  LbfgsReport report;
  report.trace.push_back(f);
  std::deque<CorrectionPair> pairs;

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) {
      report.converged = true;
      break;
    }

    std::vector<double> d = search_direction(pairs, g);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      pairs.clear();
      d = search_direction(pairs, g);
      slope = dot(g, d);
    }

    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    bool saw_finite = false;
    for (std::size_t bt = 0; bt <= options.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = objective(x_new, g_new);
      if (std::isfinite(f_new)) {
        saw_finite = true;
        if (f_new <= f + options.armijo_c1 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= options.backtrack;
    }
    if (!accepted) {
      if (!saw_finite) {
        throw OptimizationError("non-finite objective in line search at iteration " +
                                std::to_string(iter));
      }
      // No representable decrease along d: the iterate is as good as it gets.
      report.converged = true;
      break;
    }

    CorrectionPair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - x[i];
      pair.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * std::sqrt(dot(pair.y, pair.y)) * std::sqrt(dot(pair.s, pair.s))) {
      pair.rho = 1.0 / sy;
      pairs.push_back(std::move(pair));
      if (pairs.size() > options.memory) pairs.pop_front();
    }

    const double decrease = f - f_new;
    const double scale = std::max({std::abs(f), std::abs(f_new), 1e-300});
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    report.iterations = iter;
    report.trace.push_back(f);
    if (decrease / scale < options.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.objective = f;
  return report;
}

}  // namespace ctrnet
