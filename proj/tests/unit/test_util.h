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

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "ctrnet/clicklog.h"
#include "ctrnet/dataset.h"
#include "ctrnet/featurepipe.h"
#include "ctrnet/random.h"

namespace ctrnet::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ctrnet_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CTRNET_FIXTURE_DIR) / name;
}

// Feature strings drawn from a small alphabet that excludes whitespace, '|' and '#'.
inline std::string random_token(Rng& rng, std::size_t max_len = 6) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.:/&*^=+";
  const std::size_t len = 1 + rng.below(max_len);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
  return s;
}

inline ImpressionRecord random_record(Rng& rng, const NamespaceSchema& schema) {
  ImpressionRecord r;
  r.label = rng.bernoulli(0.3) ? 1 : 0;
  r.bid = static_cast<double>(rng.below(100000)) / 100.0;
  for (const auto& ns : schema.names) {
    auto& feats = r.id_features[ns];
    const std::size_t n = rng.below(4);
    for (std::size_t i = 0; i < n; ++i) feats.push_back(random_token(rng));
  }
  for (std::size_t j = 0; j < schema.real_dim; ++j) {
    r.real_features.push_back(rng.uniform(-1e3, 1e3) * std::pow(10.0, rng.uniform(-6, 6)));
  }
  return r;
}

// Generated log pushed through split, prune and hashing.
struct Prepared {
  VectorizedDataset train, valid, test;
  std::vector<double> oracle_train, oracle_valid, oracle_test;
};

inline Prepared prepare(const GeneratorConfig& gen, std::uint64_t tau = 10,
                        std::uint64_t dim = 100000, bool dense = true) {
  NamespaceSchema schema = NamespaceSchema::defaults();
  if (!dense) schema.real_dim = 0;
  const GeneratedLog log = generate(gen, schema);
  const SplitIndices idx = split_indices(log.records.size(), SplitRatios{0.7, 0.2, 0.1, gen.seed});
  const auto pick = [&](const std::vector<std::size_t>& rows) {
    std::vector<ImpressionRecord> recs;
    std::vector<double> ctr;
    for (std::size_t i : rows) {
      recs.push_back(log.records[i]);
      ctr.push_back(log.oracle_ctrs[i]);
    }
    return std::make_pair(std::move(recs), std::move(ctr));
  };
  auto [tr, otr] = pick(idx.train);
  auto [va, ova] = pick(idx.valid);
  auto [te, ote] = pick(idx.test);
  const KeptSet kept = prune(count_features(tr), PruneConfig{tau});
  const HashConfig hash{dim, 0};
  return Prepared{vectorize_all(tr, kept, hash), vectorize_all(va, kept, hash),
                  vectorize_all(te, kept, hash), std::move(otr), std::move(ova), std::move(ote)};
}

}  // namespace ctrnet::testing
