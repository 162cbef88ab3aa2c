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

#include "ctrnet/sparsenet.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ctrnet/binary_io.h"
#include "ctrnet/error.h"
#include "ctrnet/metrics.h"
#include "ctrnet/numeric.h"

namespace ctrnet {

namespace {

constexpr std::string_view kMlpMagic = "CTRMLP01";
constexpr std::uint32_t kMlpVersion = 1;

double activate(Activation a, double z) {
  return a == Activation::kRelu ? std::max(0.0, z) : z;
}

double activate_grad(Activation a, double z) {
  return a == Activation::kRelu ? (z > 0.0 ? 1.0 : 0.0) : 1.0;
}

std::array<double, 2> softmax2(const std::array<double, 2>& z) {
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

// -log softmax(z)[label]
double log_loss(const std::array<double, 2>& z, int label) {
  const double m = std::max(z[0], z[1]);
  const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
  return lse - z[static_cast<std::size_t>(label)];
}

ForwardResult forward_impl(const MlpModel& model, const SparseVector& x, Mode mode, Rng* rng,
                           double dropout) {
  const std::size_t n_hidden = model.arch.hidden_sizes.size();
  const bool drop = mode == Mode::kTrain && dropout > 0.0;
  const double keep_scale = drop ? 1.0 / (1.0 - dropout) : 1.0;
  ForwardResult out;
  ForwardCache& c = out.cache;
  c.pre.resize(n_hidden);
  c.activation.resize(n_hidden);
  if (drop) c.mask.resize(n_hidden);

  std::vector<double> z;
  for (std::size_t l = 0; l <= n_hidden; ++l) {
    const DenseLayer& layer = model.layers[l];
    z.assign(layer.bias.begin(), layer.bias.end());
    if (l == 0) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double v = x.values[k];
        const double* row = &layer.weights[static_cast<std::size_t>(x.indices[k]) * layer.out];
        for (std::size_t j = 0; j < layer.out; ++j) z[j] += v * row[j];
      }
    } else {
      const std::vector<double>& a = c.activation[l - 1];
      for (std::size_t i = 0; i < layer.in; ++i) {
        const double v = a[i];
        if (v == 0.0) continue;
        const double* row = &layer.weights[i * layer.out];
        for (std::size_t j = 0; j < layer.out; ++j) z[j] += v * row[j];
      }
    }
    if (l == n_hidden) {
      c.logits = {z[0], z[1]};
      break;
    }
    std::vector<double>& act = c.activation[l];
    act.resize(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) act[j] = activate(model.arch.activation, z[j]);
    if (drop) {
      std::vector<double>& m = c.mask[l];
      m.resize(z.size());
      for (std::size_t j = 0; j < z.size(); ++j) {
        m[j] = rng->bernoulli(1.0 - dropout) ? keep_scale : 0.0;
        act[j] *= m[j];
      }
    }
    c.pre[l] = z;
  }
  c.probs = softmax2(c.logits);
  out.ctr = c.probs[1];
  return out;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void MlpArchitecture::validate() const {
  if (input_dim < 1) throw ConfigError("input_dim must be >= 1");
  for (std::size_t h : hidden_sizes) {
    if (h < 1) throw ConfigError("hidden layer sizes must be >= 1");
  }
}

std::size_t MlpArchitecture::parameter_count() const {
  std::size_t in = static_cast<std::size_t>(input_dim), total = 0;
  for (std::size_t h : hidden_sizes) {
    total += in * h + h;
    in = h;
  }
  return total + in * kOutputDim + kOutputDim;
}

const std::vector<std::vector<std::size_t>>& MlpArchitecture::presets() {
  static const std::vector<std::vector<std::size_t>> kPresets = {
      {10}, {25}, {50}, {100}, {50, 50}, {100, 100}};
  return kPresets;
}

void MlpTrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(l2 >= 0.0)) throw ConfigError("l2 must be >= 0");
  if (!(decay >= 0.0)) throw ConfigError("decay must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0,1)");
  if (!(learning_rate * l2 < 1.0)) throw ConfigError("learning_rate * l2 must be < 1");
}

double MlpTrainConfig::rate_at(std::uint64_t instances_seen) const {
  const double progress = decay * static_cast<double>(instances_seen) / 1e6;
  if (schedule == DecaySchedule::kLinear) return learning_rate * std::max(0.0, 1.0 - progress);
  return learning_rate / (1.0 + progress);
}

MlpModel MlpModel::initialize(const MlpArchitecture& arch, const HashConfig& hash,
                              std::uint64_t seed) {
  arch.validate();
  if (arch.input_dim != hash.dimension) {
    throw DimensionError("input_dim " + std::to_string(arch.input_dim) +
                         " differs from hash dimension " + std::to_string(hash.dimension));
  }
  MlpModel m;
  m.arch = arch;
  m.hash = hash;
  Rng rng(seed);
  std::size_t in = static_cast<std::size_t>(arch.input_dim);
  std::vector<std::size_t> outs = arch.hidden_sizes;
  outs.push_back(MlpArchitecture::kOutputDim);
  for (std::size_t out : outs) {
    DenseLayer layer{in, out, std::vector<double>(in * out), std::vector<double>(out, 0.0)};
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
    m.layers.push_back(std::move(layer));
    in = out;
  }
  return m;
}

double MlpModel::predict(const SparseVector& x) const {
  x.check(arch.input_dim);
  return forward_impl(*this, x, Mode::kInfer, nullptr, 0.0).ctr;
}

void MlpModel::save(const std::filesystem::path& path) const {
  BinaryWriter w;
  w.magic(kMlpMagic);
  w.u32(kMlpVersion);
  w.u64(arch.input_dim);
  w.u8(static_cast<std::uint8_t>(arch.activation));
  w.u32(static_cast<std::uint32_t>(arch.hidden_sizes.size()));
  for (std::size_t h : arch.hidden_sizes) w.u64(h);
  for (const auto& layer : layers) {
    w.f64s(layer.weights);
    w.f64s(layer.bias);
  }
  w.u64(instances_seen);
  w.save(path);
}

MlpModel MlpModel::load(const std::filesystem::path& path, const HashConfig& hash) {
  BinaryReader r = BinaryReader::from_file(path);
  r.expect_magic(kMlpMagic);
  if (r.u32() != kMlpVersion) throw IoError("unsupported network model version");
  MlpArchitecture arch;
  arch.input_dim = r.u64();
  const std::uint8_t act = r.u8();
  if (act > 1) throw IoError("unknown activation in " + path.string());
  arch.activation = static_cast<Activation>(act);
  arch.hidden_sizes.resize(r.u32());
  for (auto& h : arch.hidden_sizes) h = r.u64();
  MlpModel m = initialize(arch, hash, 0);
  for (auto& layer : m.layers) {
    r.f64s(layer.weights);
    r.f64s(layer.bias);
  }
  m.instances_seen = r.u64();
  if (!r.at_end()) throw IoError("trailing bytes in " + path.string());
  return m;
}

ForwardResult forward(const MlpModel& model, const SparseVector& x, Mode mode, Rng& rng,
                      double dropout) {
  x.check(model.arch.input_dim);
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0,1)");
  return forward_impl(model, x, mode, &rng, dropout);
}

MlpGradients compute_gradients(const MlpModel& model, std::span<const SparseVector> rows,
                               std::span<const std::uint8_t> labels, Mode mode, Rng& rng,
                               double dropout) {
  if (rows.empty()) throw TrainingError("empty batch");
  if (rows.size() != labels.size()) throw DimensionError("batch rows/labels length");
  const std::size_t n_layers = model.layers.size();
  const std::size_t n_hidden = n_layers - 1;

  MlpGradients g;
  for (const auto& x : rows) {
    x.check(model.arch.input_dim);
    g.input_rows.insert(g.input_rows.end(), x.indices.begin(), x.indices.end());
  }
  std::sort(g.input_rows.begin(), g.input_rows.end());
  g.input_rows.erase(std::unique(g.input_rows.begin(), g.input_rows.end()), g.input_rows.end());
  const std::size_t width0 = model.layers[0].out;
  g.input_weights.assign(g.input_rows.size() * width0, 0.0);
  g.layers.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const DenseLayer& src = model.layers[l];
    g.layers[l] = DenseLayer{src.in, src.out, {}, std::vector<double>(src.out, 0.0)};
    if (l > 0) g.layers[l].weights.assign(src.weights.size(), 0.0);
  }

  const double inv_b = 1.0 / static_cast<double>(rows.size());
  double loss_sum = 0.0;
  std::vector<double> delta, delta_prev;
  for (std::size_t b = 0; b < rows.size(); ++b) {
    const SparseVector& x = rows[b];
    const int y = labels[b];
    const ForwardResult fwd = forward_impl(model, x, mode, &rng, dropout);
    const ForwardCache& c = fwd.cache;
    loss_sum += log_loss(c.logits, y);

    delta = {c.probs[0] * inv_b, c.probs[1] * inv_b};
    delta[static_cast<std::size_t>(y)] -= inv_b;

    for (std::size_t l = n_layers; l-- > 0;) {
      const DenseLayer& layer = model.layers[l];
      DenseLayer& gl = g.layers[l];
      for (std::size_t j = 0; j < layer.out; ++j) gl.bias[j] += delta[j];
      if (l == 0) {
        for (std::size_t k = 0; k < x.size(); ++k) {
          const auto slot = static_cast<std::size_t>(
              std::lower_bound(g.input_rows.begin(), g.input_rows.end(), x.indices[k]) -
              g.input_rows.begin());
          double* grow = &g.input_weights[slot * width0];
          const double v = x.values[k];
          for (std::size_t j = 0; j < width0; ++j) grow[j] += v * delta[j];
        }
        break;
      }
      const std::vector<double>& a = c.activation[l - 1];
      delta_prev.assign(layer.in, 0.0);
      for (std::size_t i = 0; i < layer.in; ++i) {
        const double* wrow = &layer.weights[i * layer.out];
        double* grow = &gl.weights[i * layer.out];
        double back = 0.0;
        for (std::size_t j = 0; j < layer.out; ++j) {
          grow[j] += a[i] * delta[j];
          back += wrow[j] * delta[j];
        }
        if (!c.mask.empty()) back *= c.mask[l - 1][i];
        delta_prev[i] = back * activate_grad(model.arch.activation, c.pre[l - 1][i]);
      }
      delta.swap(delta_prev);
    }
    (void)n_hidden;
  }
  g.batch_nll = loss_sum * inv_b;
  return g;
}

SgdState::SgdState(const MlpModel& model)
    : log_decay_{0.0}, last_step_(static_cast<std::size_t>(model.arch.input_dim), 0) {}

void SgdState::catch_up(DenseLayer& input, std::uint32_t row) {
  const std::uint64_t now = steps();
  const std::uint64_t last = last_step_[row];
  if (last == now) return;
  const double factor = std::exp(log_decay_[now] - log_decay_[last]);
  double* w = &input.weights[static_cast<std::size_t>(row) * input.out];
  for (std::size_t j = 0; j < input.out; ++j) w[j] *= factor;
  last_step_[row] = now;
}

double sgd_step(MlpModel& model, SgdState& state, std::span<const SparseVector> rows,
                std::span<const std::uint8_t> labels, const MlpTrainConfig& config, Rng& rng) {
  const double eta = config.rate_at(model.instances_seen);
  const double l2 = config.l2;
  DenseLayer& input = model.layers[0];

  for (const auto& x : rows) {
    x.check(model.arch.input_dim);
    for (std::uint32_t i : x.indices) state.catch_up(input, i);
  }
  const MlpGradients g = compute_gradients(model, rows, labels, Mode::kTrain, rng, config.dropout);

  bool finite = std::isfinite(g.batch_nll) && all_finite(g.input_weights);
  for (const auto& gl : g.layers) finite = finite && all_finite(gl.weights) && all_finite(gl.bias);
  if (!finite) {
    std::ostringstream msg;
    msg << "non-finite gradient at step " << state.steps() << " (instances seen "
        << model.instances_seen << ", learning rate " << eta << ", batch nll " << g.batch_nll
        << ")";
    throw TrainingError(msg.str());
  }

  const std::uint64_t now = state.steps();
  const std::size_t width0 = input.out;
  for (std::size_t s = 0; s < g.input_rows.size(); ++s) {
    const std::uint32_t row = g.input_rows[s];
    double* w = &input.weights[static_cast<std::size_t>(row) * width0];
    const double* gw = &g.input_weights[s * width0];
    for (std::size_t j = 0; j < width0; ++j) w[j] -= eta * (gw[j] + l2 * w[j]);
    state.last_step_[row] = now + 1;
  }
  for (std::size_t j = 0; j < width0; ++j) input.bias[j] -= eta * g.layers[0].bias[j];
  for (std::size_t l = 1; l < model.layers.size(); ++l) {
    DenseLayer& layer = model.layers[l];
    const DenseLayer& gl = g.layers[l];
    for (std::size_t k = 0; k < layer.weights.size(); ++k) {
      layer.weights[k] -= eta * (gl.weights[k] + l2 * layer.weights[k]);
    }
    for (std::size_t j = 0; j < layer.out; ++j) layer.bias[j] -= eta * gl.bias[j];
  }

  state.log_decay_.push_back(state.log_decay_.back() + std::log1p(-eta * l2));
  model.instances_seen += rows.size();
  return g.batch_nll;
}

void flush_lazy_l2(MlpModel& model, SgdState& state) {
  for (std::size_t row = 0; row < state.last_step_.size(); ++row) {
    state.catch_up(model.layers[0], static_cast<std::uint32_t>(row));
  }
}

bool EarlyStopping::update(double loss) {
  ++epoch_;
  if (best_epoch_ == 0 || loss < best_) {
    best_ = loss;
    best_epoch_ = epoch_;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

MlpTrainResult train_mlp(const VectorizedDataset& train, const VectorizedDataset& valid,
                         const MlpArchitecture& arch, const MlpTrainConfig& config) {
  config.validate();
  if (train.empty() || valid.empty()) throw TrainingError("train and valid splits must be nonempty");
  if (!(train.hash == valid.hash)) throw ConfigError("train/valid hash configs differ");

  MlpTrainResult result;
  MlpModel model = MlpModel::initialize(arch, train.hash, derive_seed(config.seed, "init"));
  result.model = model;
  SgdState state(model);
  Rng rng(derive_seed(config.seed, "sgd"));
  EarlyStopping stopper(config.patience);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<SparseVector> batch_rows;
  std::vector<std::uint8_t> batch_labels;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch_rows.resize(end - start);
      batch_labels.resize(end - start);
      for (std::size_t i = start; i < end; ++i) {
        batch_rows[i - start] = train.rows[order[i]];
        batch_labels[i - start] = train.labels[order[i]];
      }
      sgd_step(model, state, batch_rows, batch_labels, config, rng);
    }
    flush_lazy_l2(model, state);
    const std::vector<double> preds = model.predict_all(valid);
    const double loss = nll(make_pairs(preds, valid.labels));
    result.valid_nll.push_back(loss);
    result.epochs_run = epoch;
    if (stopper.update(loss)) result.model = model;
    if (stopper.should_stop()) break;
  }
  result.best_epoch = stopper.best_epoch();
  if (result.best_epoch > 0) {
    result.best_valid_nll = stopper.best_loss();
  } else {
    const std::vector<double> preds = result.model.predict_all(valid);
    result.best_valid_nll = nll(make_pairs(preds, valid.labels));
  }
  return result;
}

namespace {

double batch_loss(const MlpModel& model, std::span<const SparseVector> rows,
                  std::span<const std::uint8_t> labels) {
  double sum = 0.0;
  for (std::size_t b = 0; b < rows.size(); ++b) {
    const auto fwd = forward_impl(model, rows[b], Mode::kInfer, nullptr, 0.0);
    sum += log_loss(fwd.cache.logits, labels[b]);
  }
  return sum / static_cast<double>(rows.size());
}

bool near_kink(const MlpModel& model, const SparseVector& x) {
  const auto fwd = forward_impl(model, x, Mode::kInfer, nullptr, 0.0);
  for (const auto& pre : fwd.cache.pre) {
    for (double z : pre) {
      if (std::abs(z) < 1e-3) return true;
    }
  }
  return false;
}

SparseVector random_sparse(Rng& rng, std::uint64_t dim) {
  const std::size_t nnz = std::min<std::size_t>(static_cast<std::size_t>(dim), 2 + rng.below(4));
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::vector<std::uint32_t> picked;
  while (picked.size() < nnz) {
    const auto i = static_cast<std::uint32_t>(rng.below(dim));
    if (std::find(picked.begin(), picked.end(), i) != picked.end()) continue;
    picked.push_back(i);
    entries.emplace_back(i, rng.uniform(0.5, 1.5));
  }
  return SparseVector::from_pairs(std::move(entries));
}

}  // namespace

GradCheckResult grad_check(const MlpArchitecture& arch, std::uint64_t seed,
                           const GradCheckOptions& options) {
  arch.validate();
  if (arch.parameter_count() > 10000) throw ConfigError("grad_check needs <= 10000 parameters");
  MlpModel model = MlpModel::initialize(arch, HashConfig{arch.input_dim, 0}, seed);
  Rng rng(derive_seed(seed, "grad_check"));
  for (auto& layer : model.layers) {
    for (double& b : layer.bias) b = rng.uniform(-0.1, 0.1);
  }

  std::vector<SparseVector> rows(options.batch_size);
  std::vector<std::uint8_t> labels(options.batch_size);
  for (std::size_t b = 0; b < rows.size(); ++b) {
    labels[b] = rng.bernoulli(0.5) ? 1 : 0;
    std::size_t attempts = 0;
    do {
      if (++attempts > 100000) throw Error("grad_check: cannot avoid ReLU kinks");
      rows[b] = random_sparse(rng, arch.input_dim);
    } while (arch.activation == Activation::kRelu && near_kink(model, rows[b]));
  }

  Rng unused(0);
  MlpGradients g = compute_gradients(model, rows, labels, Mode::kInfer, unused, 0.0);

  // Analytic value for (layer, flat weight index) or bias when `is_bias`.
  const auto analytic = [&](std::size_t l, std::size_t k, bool is_bias) -> double {
    if (is_bias) return g.layers[l].bias[k];
    if (l > 0) return g.layers[l].weights[k];
    const std::size_t width = model.layers[0].out;
    const auto row = static_cast<std::uint32_t>(k / width);
    auto it = std::lower_bound(g.input_rows.begin(), g.input_rows.end(), row);
    if (it == g.input_rows.end() || *it != row) return 0.0;
    return g.input_weights[static_cast<std::size_t>(it - g.input_rows.begin()) * width + k % width];
  };

  struct Coord {
    std::size_t layer, index;
    bool is_bias;
  };
  std::vector<Coord> coords;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    for (std::size_t k = 0; k < model.layers[l].weights.size(); ++k) coords.push_back({l, k, false});
    for (std::size_t k = 0; k < model.layers[l].bias.size(); ++k) coords.push_back({l, k, true});
  }
  std::vector<double> values(coords.size());
  for (std::size_t c = 0; c < coords.size(); ++c) {
    values[c] = analytic(coords[c].layer, coords[c].index, coords[c].is_bias);
  }
  if (options.corrupt_gradient) {
    std::size_t worst = 0;
    for (std::size_t c = 1; c < values.size(); ++c) {
      if (std::abs(values[c]) > std::abs(values[worst])) worst = c;
    }
    values[worst] = -values[worst];
  }

  constexpr double kStep = 1e-5;
  constexpr double kFloor = 1e-4;
  GradCheckResult result;
  for (std::size_t c = 0; c < coords.size(); ++c) {
    DenseLayer& layer = model.layers[coords[c].layer];
    double& p = coords[c].is_bias ? layer.bias[coords[c].index] : layer.weights[coords[c].index];
    const double saved = p;
    const auto at = [&](double offset) {
      p = saved + offset;
      return batch_loss(model, rows, labels);
    };
    const double numeric =
        (-at(2 * kStep) + 8 * at(kStep) - 8 * at(-kStep) + at(-2 * kStep)) / (12 * kStep);
    p = saved;
    const double err =
        std::abs(values[c] - numeric) / std::max({std::abs(values[c]), std::abs(numeric), kFloor});
    if (err > result.max_relative_error || result.worst_coordinate.empty()) {
      result.max_relative_error = std::max(result.max_relative_error, err);
      std::ostringstream name;
      name << "layer " << coords[c].layer << (coords[c].is_bias ? " bias[" : " weight[")
           << coords[c].index << "]";
      result.worst_coordinate = name.str();
    }
  }
  return result;
}

}  // namespace ctrnet
