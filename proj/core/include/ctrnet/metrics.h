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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ctrnet {

inline constexpr double kProbabilityClamp = 1e-12;

struct EvalPair {
  double prediction = 0.0;
  int label = 0;
};

std::vector<EvalPair> make_pairs(std::span<const double> predictions,
                                 std::span<const std::uint8_t> labels);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
  friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

struct MetricsReport {
  double nll = 0.0;
  double auprc = 0.0;
  std::vector<PrPoint> pr_points;
  std::size_t n = 0;
  std::size_t positives = 0;
};

// Mean negative log likelihood with predictions clamped to [1e-12, 1 - 1e-12].
double nll(std::span<const EvalPair> pairs);

// One point per group of tied predictions (descending), preceded by
// (0, precision of the first group). Needs at least one positive.
std::vector<PrPoint> pr_curve(std::span<const EvalPair> pairs);

// Average precision: sum over tie groups of (R_k - R_{k-1}) * P_k.
double auprc(std::span<const EvalPair> pairs);

MetricsReport evaluate(std::span<const EvalPair> pairs);
MetricsReport evaluate(std::span<const double> predictions, std::span<const std::uint8_t> labels);

struct MetricDeltas {
  double nll_pct = 0.0;
  double auprc_pct = 0.0;
};

// Percentage change of candidate over baseline; negative nll_pct is better.
MetricDeltas deltas(const MetricsReport& baseline, const MetricsReport& candidate);

// `metric,value` rows: nll, auprc, n, positives.
void write_report_csv(const std::filesystem::path& path, const MetricsReport& report);
// `recall,precision` rows.
void write_pr_csv(const std::filesystem::path& path, std::span<const PrPoint> points);

}  // namespace ctrnet
