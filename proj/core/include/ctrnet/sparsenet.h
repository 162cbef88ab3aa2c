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

#include <array>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctrnet/ctr_model.h"
#include "ctrnet/dataset.h"
#include "ctrnet/random.h"

namespace ctrnet {

enum class Activation : std::uint8_t { kRelu = 0, kLinear = 1 };

enum class DecaySchedule : std::uint8_t {
  kInverse = 0,  // eta0 / (1 + d * t / 1e6)
  kLinear = 1,   // eta0 * max(0, 1 - d * t / 1e6)
};

struct MlpArchitecture {
  std::uint64_t input_dim = 100000;
  std::vector<std::size_t> hidden_sizes = {50};
  Activation activation = Activation::kRelu;
  static constexpr std::size_t kOutputDim = 2;

  void validate() const;
  std::size_t parameter_count() const;

  // Hidden-layer presets, in the order they are added to ensembles.
  static const std::vector<std::vector<std::size_t>>& presets();
};

struct MlpTrainConfig {
  double learning_rate = 0.1;
  double l2 = 3e-4;
  // Learning-rate decay per million training instances.
  double decay = 2e-4;
  DecaySchedule schedule = DecaySchedule::kInverse;
  std::size_t batch_size = 100;
  // Dropout on hidden activations only.
  double dropout = 0.5;
  std::size_t max_epochs = 30;
  std::size_t patience = 3;
  std::uint64_t seed = 0;

  void validate() const;
  double rate_at(std::uint64_t instances_seen) const;
};

// weights are `in` rows of `out` values: row i holds input unit i's fan-out.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& w(std::size_t i, std::size_t j) { return weights[i * out + j]; }
  double w(std::size_t i, std::size_t j) const { return weights[i * out + j]; }
};

struct MlpModel final : CtrModel {
  MlpArchitecture arch;
  HashConfig hash;
  // layers[0] is the sparse input layer; the last layer produces the two logits.
  std::vector<DenseLayer> layers;
  std::uint64_t instances_seen = 0;

  // Weights uniform in +-1/sqrt(fan_in), biases zero.
  static MlpModel initialize(const MlpArchitecture& arch, const HashConfig& hash,
                             std::uint64_t seed);

  // Inference-mode click probability.
  double predict(const SparseVector& x) const override;
  const HashConfig& hash_config() const override { return hash; }
  std::string_view kind() const override { return "ann"; }

  // Binary: magic "CTRMLP01", version, architecture, layers, instances seen.
  void save(const std::filesystem::path& path) const;
  static MlpModel load(const std::filesystem::path& path, const HashConfig& hash);
};

enum class Mode { kTrain, kInfer };

struct ForwardCache {
  std::vector<std::vector<double>> pre;         // hidden pre-activations
  std::vector<std::vector<double>> activation;  // hidden outputs after dropout
  std::vector<std::vector<double>> mask;        // dropout scale per unit; empty in infer mode
  std::array<double, 2> logits{};
  std::array<double, 2> probs{};  // softmax; index 1 is "click"
};

struct ForwardResult {
  double ctr = 0.0;
  ForwardCache cache;
};

// In train mode hidden activations get inverted dropout (keep with
// probability 1 - dropout, scale by 1/(1 - dropout)); infer mode ignores rng.
ForwardResult forward(const MlpModel& model, const SparseVector& x, Mode mode, Rng& rng,
                      double dropout = 0.0);

// Gradient of the mean batch NLL (no l2 term).
struct MlpGradients {
  // Sorted unique input indices of the batch and their fan-out gradients.
  std::vector<std::uint32_t> input_rows;
  std::vector<double> input_weights;  // input_rows.size() x layers[0].out
  // Same shapes as the model's layers, except layers[0].weights is empty.
  std::vector<DenseLayer> layers;
  double batch_nll = 0.0;
};

MlpGradients compute_gradients(const MlpModel& model, std::span<const SparseVector> rows,
                               std::span<const std::uint8_t> labels, Mode mode, Rng& rng,
                               double dropout);

// Bookkeeping for lazily applied l2 on input-layer rows.
class SgdState {
 public:
  explicit SgdState(const MlpModel& model);

  std::uint64_t steps() const { return log_decay_.size() - 1; }

 private:
  friend double sgd_step(MlpModel&, SgdState&, std::span<const SparseVector>,
                         std::span<const std::uint8_t>, const MlpTrainConfig&, Rng&);
  friend void flush_lazy_l2(MlpModel&, SgdState&);
  void catch_up(DenseLayer& input, std::uint32_t row);

  // log_decay_[s] = sum over steps k < s of log(1 - eta_k * l2).
  std::vector<double> log_decay_;
  std::vector<std::uint64_t> last_step_;
};

// One mini-batch update in place; returns the batch NLL. Rate follows the
// decay schedule at model.instances_seen, which then advances by the batch size.
double sgd_step(MlpModel& model, SgdState& state, std::span<const SparseVector> rows,
                std::span<const std::uint8_t> labels, const MlpTrainConfig& config, Rng& rng);

// Applies all pending l2 decay to every input row.
void flush_lazy_l2(MlpModel& model, SgdState& state);

// Patience-based early stopping on a validation loss sequence.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  // Records the next epoch's loss; true when it is a new best.
  bool update(double loss);
  bool should_stop() const { return since_best_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }  // 1-based, 0 if none
  double best_loss() const { return best_; }

 private:
  std::size_t patience_;
  std::size_t epoch_ = 0;
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
  double best_ = 0.0;
};

struct MlpTrainResult {
  MlpModel model;  // best-on-validation snapshot
  std::vector<double> valid_nll;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double best_valid_nll = 0.0;
};

MlpTrainResult train_mlp(const VectorizedDataset& train, const VectorizedDataset& valid,
                         const MlpArchitecture& arch, const MlpTrainConfig& config);

struct GradCheckOptions {
  std::size_t batch_size = 8;
  // Flip the sign of the largest analytic coordinate (harness self-test).
  bool corrupt_gradient = false;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_coordinate;
};

// Analytic vs. central finite-difference gradients on a random model and
// batch. ReLU inputs are redrawn until no pre-activation is within 1e-3 of 0.
GradCheckResult grad_check(const MlpArchitecture& arch, std::uint64_t seed,
                           const GradCheckOptions& options = {});

}  // namespace ctrnet
