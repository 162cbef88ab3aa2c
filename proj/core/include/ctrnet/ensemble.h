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

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "ctrnet/ctr_model.h"
#include "ctrnet/metrics.h"

namespace ctrnet {

// Weighted mean of member click probabilities (not logits).
class EnsembleModel final : public CtrModel {
 public:
  // Uniform weights.
  explicit EnsembleModel(std::vector<std::shared_ptr<const CtrModel>> members);
  // Weights must be nonnegative and sum to 1 within 1e-9.
  EnsembleModel(std::vector<std::shared_ptr<const CtrModel>> members, std::vector<double> weights);

  double predict(const SparseVector& x) const override;
  const HashConfig& hash_config() const override { return members_.front()->hash_config(); }
  std::string_view kind() const override { return "ensemble"; }

  std::size_t size() const { return members_.size(); }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<std::shared_ptr<const CtrModel>> members_;
  std::vector<double> weights_;
};

// Same weighted mean over precomputed member prediction columns.
std::vector<double> average_predictions(std::span<const std::vector<double>> member_predictions,
                                        std::span<const double> weights = {});

struct CurvePoint {
  std::size_t k = 0;
  double auprc = 0.0;
  double nll = 0.0;
};

// Uniform prefix ensembles of sizes 1..n in member order.
std::vector<CurvePoint> ensemble_curve(std::span<const std::vector<double>> member_predictions,
                                       std::span<const std::uint8_t> labels);
std::vector<CurvePoint> ensemble_curve(std::span<const std::shared_ptr<const CtrModel>> members,
                                       const VectorizedDataset& test);

// `k,auprc,nll`
void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> curve);

}  // namespace ctrnet
