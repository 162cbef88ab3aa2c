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

#include "ctrnet/metrics.h"
#include "ctrnet/random.h"

namespace ctrnet {
namespace {

void BM_Auprc(benchmark::State& state) {
  Rng rng(3);
  std::vector<EvalPair> pairs;
  for (int64_t i = 0; i < state.range(0); ++i) pairs.push_back({rng.uniform(), rng.bernoulli(0.1)});
  for (auto _ : state) benchmark::DoNotOptimize(auprc(pairs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auprc)->Arg(10000)->Arg(1000000);

void BM_Nll(benchmark::State& state) {
  Rng rng(4);
  std::vector<EvalPair> pairs;
  for (int i = 0; i < 100000; ++i) pairs.push_back({rng.uniform(), rng.bernoulli(0.1)});
  for (auto _ : state) benchmark::DoNotOptimize(nll(pairs));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_Nll);

}  // namespace
}  // namespace ctrnet

BENCHMARK_MAIN();
