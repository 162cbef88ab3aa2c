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

#include "ctrnet/linearmodel.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctrnet/binary_io.h"
#include "ctrnet/error.h"
#include "ctrnet/metrics.h"
#include "ctrnet/numeric.h"
#include "ctrnet/random.h"

namespace ctrnet {

namespace {

constexpr std::string_view kLinearMagic = "CTRLINR1";
constexpr std::uint32_t kLinearVersion = 1;

double sparse_dot(std::span<const double> w, const SparseVector& x) {
  double z = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) z += w[x.indices[k]] * x.values[k];
  return z;
}

// Shared by the objective and L-BFGS: parameters laid out as [w..., b].
double objective_into(std::span<const double> params, const VectorizedDataset& data, double l2,
                      std::span<double> grad) {
  const std::size_t dim = params.size() - 1;
  const double bias = params[dim];
  const double n = static_cast<double>(data.size());
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const SparseVector& x = data.rows[i];
    const double z = sparse_dot(params.first(dim), x) + bias;
    const double y = data.labels[i];
    terms[i] = softplus(z) - y * z;
    const double r = (sigmoid(z) - y) / n;
    for (std::size_t k = 0; k < x.size(); ++k) grad[x.indices[k]] += r * x.values[k];
    grad[dim] += r;
  }
  double reg = 0.0;
  const double lambda = l2 / n;
  for (std::size_t j = 0; j < dim; ++j) {
    reg += params[j] * params[j];
    grad[j] += lambda * params[j];
  }
  return pairwise_sum(terms) / n + 0.5 * lambda * reg;
}

}  // namespace

std::vector<double> CtrModel::predict_all(const VectorizedDataset& data) const {
  if (!(data.hash == hash_config())) {
    throw ConfigError("dataset hash config does not match the model's");
  }
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict(data.rows[i]);
  return out;
}

double LinearModel::logit(const SparseVector& x) const {
  x.check(weights.size());
  return sparse_dot(weights, x) + bias;
}

double LinearModel::predict(const SparseVector& x) const {
  return std::clamp(sigmoid(logit(x)), kProbabilityClamp, 1.0 - kProbabilityClamp);
}

void LinearModel::save(const std::filesystem::path& path) const {
  BinaryWriter w;
  w.magic(kLinearMagic);
  w.u32(kLinearVersion);
  w.u64(weights.size());
  w.f64(bias);
  w.f64s(weights);
  w.save(path);
}

LinearModel LinearModel::load(const std::filesystem::path& path, const HashConfig& hash) {
  BinaryReader r = BinaryReader::from_file(path);
  r.expect_magic(kLinearMagic);
  if (r.u32() != kLinearVersion) throw IoError("unsupported linear model version");
  const std::uint64_t dim = r.u64();
  if (dim != hash.dimension) throw DimensionError("model dimension differs from its hash config");
  LinearModel m(hash);
  m.bias = r.f64();
  r.f64s(m.weights);
  if (!r.at_end()) throw IoError("trailing bytes in " + path.string());
  return m;
}

ObjectiveValue nll_objective(const LinearModel& model, const VectorizedDataset& data, double l2) {
  if (data.empty()) throw Error("objective of an empty dataset");
  std::vector<double> params(model.weights);
  params.push_back(model.bias);
  std::vector<double> grad(params.size());
  ObjectiveValue out;
  out.loss = objective_into(params, data, l2, grad);
  out.bias_grad = grad.back();
  grad.pop_back();
  out.weight_grad = std::move(grad);
  return out;
}

void LbfgsConfig::validate() const { options().validate(); if (l2 < 0.0) throw ConfigError("l2 must be >= 0"); }

LbfgsOptions LbfgsConfig::options() const {
  LbfgsOptions o;
  o.memory = memory;
  o.tolerance = tolerance;
  o.max_iterations = max_iterations;
  o.armijo_c1 = armijo_c1;
  o.backtrack = backtrack;
  return o;
}

LinearTrainResult train_lbfgs(const VectorizedDataset& train, const LbfgsConfig& config,
                              const LinearModel* initial) {
  config.validate();
  if (train.empty()) throw Error("train_lbfgs: empty training set");
  const std::size_t dim = train.hash.dimension;
  std::vector<double> params(dim + 1, 0.0);
  if (initial != nullptr) {
    if (initial->weights.size() != dim) throw DimensionError("initial model dimension");
    std::copy(initial->weights.begin(), initial->weights.end(), params.begin());
    params[dim] = initial->bias;
  }
  for (const auto& x : train.rows) x.check(dim);

  const Objective f = [&](std::span<const double> p, std::span<double> g) {
    return objective_into(p, train, config.l2, g);
  };
  LinearTrainResult result;
  result.report = minimize_lbfgs(f, params, config.options());
  result.model = LinearModel(train.hash);
  std::copy(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(dim),
            result.model.weights.begin());
  result.model.bias = params[dim];
  return result;
}

void SgdLrConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (l2 < 0.0) throw ConfigError("l2 must be >= 0");
}

void sgd_lr_step(LinearModel& model, std::span<const SparseVector> rows,
                 std::span<const std::uint8_t> labels, double learning_rate, double l2_per_row) {
  const double inv_b = 1.0 / static_cast<double>(rows.size());
  std::vector<std::pair<std::uint32_t, double>> grad;
  double bias_grad = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double r = (sigmoid(model.logit(rows[i])) - labels[i]) * inv_b;
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      grad.emplace_back(rows[i].indices[k], r * rows[i].values[k]);
    }
    bias_grad += r;
  }
  const SparseVector merged = SparseVector::from_pairs(std::move(grad));
  // Coordinates whose gradient cancelled to zero are still "touched".
  std::vector<std::uint32_t> touched;
  for (const auto& x : rows) touched.insert(touched.end(), x.indices.begin(), x.indices.end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::size_t k = 0;
  for (std::uint32_t j : touched) {
    double g = l2_per_row * model.weights[j];
    if (k < merged.size() && merged.indices[k] == j) g += merged.values[k++];
    model.weights[j] -= learning_rate * g;
  }
  model.bias -= learning_rate * bias_grad;
}

LinearModel train_sgd_lr(const VectorizedDataset& train, const SgdLrConfig& config) {
  config.validate();
  LinearModel model(train.hash);
  if (train.empty()) return model;
  const double l2_per_row = config.l2 / static_cast<double>(train.size());
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  std::vector<SparseVector> batch_rows;
  std::vector<std::uint8_t> batch_labels;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch_rows.clear();
      batch_labels.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch_rows.push_back(train.rows[order[i]]);
        batch_labels.push_back(train.labels[order[i]]);
      }
      sgd_lr_step(model, batch_rows, batch_labels, config.learning_rate, l2_per_row);
    }
  }
  return model;
}

}  // namespace ctrnet
