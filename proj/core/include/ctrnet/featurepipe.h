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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctrnet/clicklog.h"

namespace ctrnet {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// "ns^feat": the key used for counting, pruning and hashing.
std::string qualify(std::string_view ns, std::string_view feature);

struct HashConfig {
  std::uint64_t dimension = 100000;
  std::uint64_t seed = 0;

  void validate() const;
  // (fnv1a64(key) XOR seed) mod dimension.
  std::uint32_t index(std::string_view qualified_key) const;

  friend bool operator==(const HashConfig&, const HashConfig&) = default;
};

// Sorted indices with matching nonzero values.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  // Sorts and merges duplicate indices by summing; drops zeros.
  static SparseVector from_pairs(std::vector<std::pair<std::uint32_t, double>> entries);

  // Throws DimensionError if any index >= dim or ordering is violated.
  void check(std::uint64_t dim) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Sort-merge sum of two sparse vectors.
SparseVector merge_add(const SparseVector& a, const SparseVector& b);

using FeatureCounts = std::unordered_map<std::string, std::uint64_t>;

// Occurrence counts of qualified features over a training split.
struct VocabStats {
  FeatureCounts counts;

  std::size_t total_unique() const { return counts.size(); }
  void add(const ImpressionRecord& record);
  // Sums counts from another shard.
  void merge(const VocabStats& other);
};

VocabStats count_features(std::span<const ImpressionRecord> records);

struct PruneConfig {
  std::uint64_t threshold = 10;
  void validate() const;
};

// Features surviving frequency pruning, with their training counts.
class KeptSet {
 public:
  KeptSet() = default;
  explicit KeptSet(FeatureCounts kept) : kept_(std::move(kept)) {}

  bool contains(const std::string& qualified_key) const { return kept_.count(qualified_key) > 0; }
  std::size_t size() const { return kept_.size(); }
  const FeatureCounts& counts() const { return kept_; }

 private:
  FeatureCounts kept_;
};

// Keeps a feature iff its count >= threshold.
KeptSet prune(const VocabStats& stats, const PruneConfig& config);

// Hashes every kept feature occurrence (value 1.0 each); collisions add up.
SparseVector vectorize(const ImpressionRecord& record, const KeptSet& kept,
                       const HashConfig& hash);

// Appends namespace "A*B" holding "fa&fb" for every pair in the cross product.
ImpressionRecord cross_quadratic(const ImpressionRecord& record, const NamespaceSchema& schema,
                                 std::span<const std::pair<std::string, std::string>> pairs);

// Schema extended with the synthetic "A*B" namespaces.
NamespaceSchema with_crosses(const NamespaceSchema& schema,
                             std::span<const std::pair<std::string, std::string>> pairs);

// Sorted `feature<TAB>count` lines.
void write_counts_tsv(const std::filesystem::path& path, const FeatureCounts& counts);
FeatureCounts read_counts_tsv(const std::filesystem::path& path);

}  // namespace ctrnet
