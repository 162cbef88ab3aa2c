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

#include <benchmark/benchmark.h>

#include "ctrnet/clicklog.h"
#include "ctrnet/dataset.h"
#include "ctrnet/featurepipe.h"
#include "ctrnet/linearmodel.h"
#include "ctrnet/random.h"
#include "ctrnet/sparsenet.h"
#include "ctrnet/treeboost.h"

namespace ctrnet {
namespace {

const VectorizedDataset& train_10k() {
  static const VectorizedDataset ds = [] {
    GeneratorConfig gen;
    gen.n_impressions = 10000;
    const GeneratedLog log = generate(gen, NamespaceSchema::defaults());
    const KeptSet kept = prune(count_features(log.records), PruneConfig{3});
    return vectorize_all(log.records, kept, HashConfig{});
  }();
  return ds;
}

void BM_LrObjective(benchmark::State& state) {
  const auto& ds = train_10k();
  const LinearModel m(ds.hash);
  for (auto _ : state) benchmark::DoNotOptimize(nll_objective(m, ds, 50.0));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.size()));
}
BENCHMARK(BM_LrObjective)->Unit(benchmark::kMillisecond);

MlpModel make_mlp(std::size_t hidden) {
  MlpArchitecture arch;
  arch.hidden_sizes = {hidden};
  return MlpModel::initialize(arch, train_10k().hash, 1);
}

void BM_MlpForward(benchmark::State& state) {
  const auto& ds = train_10k();
  const MlpModel m = make_mlp(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(m, ds.rows[i], Mode::kInfer, rng));
    i = (i + 1) % ds.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MlpForward)->Arg(10)->Arg(100);

void BM_MlpSgdStep(benchmark::State& state) {
  const auto& ds = train_10k();
  MlpModel m = make_mlp(static_cast<std::size_t>(state.range(0)));
  SgdState sgd(m);
  MlpTrainConfig cfg;
  Rng rng(2);
  std::size_t start = 0;
  for (auto _ : state) {
    const std::span rows(ds.rows.data() + start, cfg.batch_size);
    const std::span labels(ds.labels.data() + start, cfg.batch_size);
    benchmark::DoNotOptimize(sgd_step(m, sgd, rows, labels, cfg, rng));
    start = (start + cfg.batch_size) % (ds.size() - cfg.batch_size);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.batch_size));
}
BENCHMARK(BM_MlpSgdStep)->Arg(10)->Arg(100);

void BM_GbdtFit(benchmark::State& state) {
  Rng rng(5);
  DenseMatrix m;
  m.rows = 10000;
  m.cols = 8;
  for (std::size_t j = 0; j < m.cols; ++j) m.column_names.push_back("c" + std::to_string(j));
  std::vector<std::uint8_t> y;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double z = -2;
    for (std::size_t j = 0; j < m.cols; ++j) {
      m.values.push_back(rng.normal());
      z += 0.3 * m.values.back();
    }
    y.push_back(rng.bernoulli(1 / (1 + std::exp(-z))));
  }
  BoostConfig cfg;
  cfg.n_trees = 20;
  cfg.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_gbdt(m, y, cfg));
}
BENCHMARK(BM_GbdtFit)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ctrnet
