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


#include "ctrnet/ensemble.h"

#include <cmath>

#include "ctrnet/error.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

namespace {

std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

void check_weights(std::span<const double> weights, std::size_t n) {
  if (weights.size() != n) throw ConfigError("ensemble needs one weight per member");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("ensemble weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("ensemble weights must sum to 1");
}

}  // namespace

EnsembleModel::EnsembleModel(std::vector<std::shared_ptr<const CtrModel>> members)
    : EnsembleModel(members, uniform_weights(members.size())) {}

EnsembleModel::EnsembleModel(std::vector<std::shared_ptr<const CtrModel>> members,
                             std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw ConfigError("ensemble needs at least one member");
  check_weights(weights_, members_.size());
  for (const auto& m : members_) {
    if (!m) throw ConfigError("null ensemble member");
    if (!(m->hash_config() == members_.front()->hash_config())) {
      throw ConfigError("ensemble members use different hash configurations");
    }
  }
}

double EnsembleModel::predict(const SparseVector& x) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < members_.size(); ++m) sum += weights_[m] * members_[m]->predict(x);
  return sum;
}

std::vector<double> average_predictions(std::span<const std::vector<double>> member_predictions,
                                        std::span<const double> weights) {
  if (member_predictions.empty()) throw ConfigError("ensemble needs at least one member");
  const std::size_t n_members = member_predictions.size();
  std::vector<double> w = weights.empty() ? uniform_weights(n_members)
                                          : std::vector<double>(weights.begin(), weights.end());
  check_weights(w, n_members);
  const std::size_t n = member_predictions.front().size();
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n_members; ++m) {
    if (member_predictions[m].size() != n) throw DimensionError("member prediction lengths differ");
    for (std::size_t i = 0; i < n; ++i) out[i] += w[m] * member_predictions[m][i];
  }
  return out;
}

std::vector<CurvePoint> ensemble_curve(std::span<const std::vector<double>> member_predictions,
                                       std::span<const std::uint8_t> labels) {
  if (member_predictions.empty()) throw ConfigError("ensemble curve needs at least one member");
  if (labels.empty()) throw Error("ensemble curve on an empty test set");
  std::vector<CurvePoint> curve;
  for (std::size_t k = 1; k <= member_predictions.size(); ++k) {
    const auto preds = average_predictions(member_predictions.first(k));
    const MetricsReport r = evaluate(preds, labels);
    curve.push_back({k, r.auprc, r.nll});
  }
  return curve;
}

std::vector<CurvePoint> ensemble_curve(std::span<const std::shared_ptr<const CtrModel>> members,
                                       const VectorizedDataset& test) {
  if (test.empty()) throw Error("ensemble curve on an empty test set");
  std::vector<std::vector<double>> preds;
  for (const auto& m : members) {
    if (!(m->hash_config() == members.front()->hash_config())) {
      throw ConfigError("ensemble members use different hash configurations");
    }
    preds.push_back(m->predict_all(test));
  }
  return ensemble_curve(preds, test.labels);
}

void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> curve) {
  LineWriter w(path);
  w.write_line("k,auprc,nll");
  for (const auto& p : curve) {
    w.write_line(std::to_string(p.k) + "," + format_double(p.auprc) + "," + format_double(p.nll));
  }
  w.commit();
}

}  // namespace ctrnet
