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

#include "ctrnet/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctrnet/error.h"
#include "ctrnet/numeric.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

std::vector<EvalPair> make_pairs(std::span<const double> predictions,
                                 std::span<const std::uint8_t> labels) {
  if (predictions.size() != labels.size()) throw DimensionError("predictions/labels length");
  std::vector<EvalPair> pairs(predictions.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = {predictions[i], labels[i]};
  return pairs;
}

double nll(std::span<const EvalPair> pairs) {
  if (pairs.empty()) throw Error("nll of an empty set");
  std::vector<double> terms(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double p = std::clamp(pairs[i].prediction, kProbabilityClamp, 1.0 - kProbabilityClamp);
    terms[i] = pairs[i].label == 1 ? -std::log(p) : -std::log1p(-p);
  }
  return pairwise_sum(terms) / static_cast<double>(pairs.size());
}

namespace {

struct TieGroup {
  std::size_t count;
  std::size_t positives;
};

// Tie groups in descending prediction order, plus the total positive count.
std::vector<TieGroup> tie_groups(std::span<const EvalPair> pairs, std::size_t& positives) {
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].prediction > pairs[b].prediction;
  });
  std::vector<TieGroup> groups;
  positives = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const EvalPair& p = pairs[order[k]];
    if (k == 0 || p.prediction != pairs[order[k - 1]].prediction) groups.push_back({0, 0});
    ++groups.back().count;
    if (p.label == 1) {
      ++groups.back().positives;
      ++positives;
    }
  }
  if (positives == 0) throw Error("precision-recall needs at least one positive label");
  return groups;
}

}  // namespace

std::vector<PrPoint> pr_curve(std::span<const EvalPair> pairs) {
  std::size_t positives = 0;
  const auto groups = tie_groups(pairs, positives);
  std::vector<PrPoint> points;
  points.reserve(groups.size() + 1);
  std::size_t tp = 0, seen = 0;
  for (const auto& g : groups) {
    tp += g.positives;
    seen += g.count;
    points.push_back({static_cast<double>(tp) / static_cast<double>(positives),
                      static_cast<double>(tp) / static_cast<double>(seen)});
  }
  points.insert(points.begin(), PrPoint{0.0, points.front().precision});
  return points;
}

double auprc(std::span<const EvalPair> pairs) {
  std::size_t positives = 0;
  const auto groups = tie_groups(pairs, positives);
  double area = 0.0;
  std::size_t tp = 0, seen = 0;
  for (const auto& g : groups) {
    tp += g.positives;
    seen += g.count;
    if (g.positives == 0) continue;
    const double recall_step = static_cast<double>(g.positives) / static_cast<double>(positives);
    area += recall_step * (static_cast<double>(tp) / static_cast<double>(seen));
  }
  return std::clamp(area, 0.0, 1.0);
}

MetricsReport evaluate(std::span<const EvalPair> pairs) {
  MetricsReport report;
  report.n = pairs.size();
  report.nll = nll(pairs);
  report.pr_points = pr_curve(pairs);
  report.auprc = auprc(pairs);
  report.positives = static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const EvalPair& p) { return p.label == 1; }));
  return report;
}

MetricsReport evaluate(std::span<const double> predictions, std::span<const std::uint8_t> labels) {
  const auto pairs = make_pairs(predictions, labels);
  return evaluate(pairs);
}

MetricDeltas deltas(const MetricsReport& baseline, const MetricsReport& candidate) {
  if (baseline.nll == 0.0 || baseline.auprc == 0.0) {
    throw Error("baseline metric is zero; percentage change undefined");
  }
  return {100.0 * (candidate.nll - baseline.nll) / baseline.nll,
          100.0 * (candidate.auprc - baseline.auprc) / baseline.auprc};
}

void write_report_csv(const std::filesystem::path& path, const MetricsReport& report) {
  LineWriter w(path);
  w.write_line("metric,value");
  w.write_line("nll," + format_double(report.nll));
  w.write_line("auprc," + format_double(report.auprc));
  w.write_line("n," + std::to_string(report.n));
  w.write_line("positives," + std::to_string(report.positives));
  w.commit();
}

void write_pr_csv(const std::filesystem::path& path, std::span<const PrPoint> points) {
  LineWriter w(path);
  w.write_line("recall,precision");
  for (const auto& p : points) w.write_line(format_double(p.recall) + "," + format_double(p.precision));
  w.commit();
}

}  // namespace ctrnet
