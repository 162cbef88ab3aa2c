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
#include "ctrnet/featurepipe.h"

namespace ctrnet {
namespace {

const GeneratedLog& log_10k() {
  static const GeneratedLog log = [] {
    GeneratorConfig gen;
    gen.n_impressions = 10000;
    return generate(gen, NamespaceSchema::defaults());
  }();
  return log;
}

void BM_CountFeatures(benchmark::State& state) {
  const auto& recs = log_10k().records;
  for (auto _ : state) benchmark::DoNotOptimize(count_features(recs));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(recs.size()));
}
BENCHMARK(BM_CountFeatures);

void BM_Vectorize(benchmark::State& state) {
  const auto& recs = log_10k().records;
  const KeptSet kept = prune(count_features(recs), PruneConfig{1});
  const HashConfig hash{static_cast<std::uint64_t>(state.range(0)), 0};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vectorize(recs[i], kept, hash));
    i = (i + 1) % recs.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Vectorize)->Arg(1000)->Arg(100000);

void BM_ParseLine(benchmark::State& state) {
  const NamespaceSchema schema = NamespaceSchema::defaults();
  const std::string line = write_line(log_10k().records[0], schema);
  for (auto _ : state) benchmark::DoNotOptimize(parse_line(line, schema));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(line.size()));
}
BENCHMARK(BM_ParseLine);

}  // namespace
}  // namespace ctrnet
