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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ctrnet/ctr_model.h"
#include "ctrnet/dataset.h"
#include "ctrnet/lbfgs.h"

namespace ctrnet {

// Logistic regression over hashed features, dense weights of length D.
struct LinearModel final : CtrModel {
  HashConfig hash;
  std::vector<double> weights;
  double bias = 0.0;

  LinearModel() = default;
  explicit LinearModel(const HashConfig& h) : hash(h), weights(h.dimension, 0.0) {}

  // sigma(w.x + b), clamped to [1e-12, 1 - 1e-12]. Throws DimensionError for
  // an index outside [0, D).
  double predict(const SparseVector& x) const override;
  double logit(const SparseVector& x) const;
  const HashConfig& hash_config() const override { return hash; }
  std::string_view kind() const override { return "lr"; }

  // Binary: magic "CTRLINR1", version, D, bias, weights.
  void save(const std::filesystem::path& path) const;
  static LinearModel load(const std::filesystem::path& path, const HashConfig& hash);
};

struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> weight_grad;
  double bias_grad = 0.0;
};

// loss = mean log-loss + (l2 / N) * ||w||^2 / 2, bias unregularized.
ObjectiveValue nll_objective(const LinearModel& model, const VectorizedDataset& data, double l2);

struct LbfgsConfig {
  std::size_t memory = 10;
  double l2 = 50.0;
  double tolerance = 1e-5;
  std::size_t max_iterations = 200;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;

  void validate() const;
  LbfgsOptions options() const;
};

struct LinearTrainResult {
  LinearModel model;
  LbfgsReport report;
};

// Starts from zero weights unless `initial` is given.
LinearTrainResult train_lbfgs(const VectorizedDataset& train, const LbfgsConfig& config,
                              const LinearModel* initial = nullptr);

struct SgdLrConfig {
  double learning_rate = 0.1;
  double l2 = 0.0;
  std::size_t batch_size = 100;
  std::size_t epochs = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Mini-batch SGD on the same objective; l2 is applied only to coordinates
// touched by the batch.
LinearModel train_sgd_lr(const VectorizedDataset& train, const SgdLrConfig& config);

// One mini-batch update in place. Exposed for tests.
void sgd_lr_step(LinearModel& model, std::span<const SparseVector> rows,
                 std::span<const std::uint8_t> labels, double learning_rate, double l2_per_row);

}  // namespace ctrnet
