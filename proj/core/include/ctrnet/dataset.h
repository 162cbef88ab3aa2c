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
#include <vector>

#include "ctrnet/clicklog.h"
#include "ctrnet/featurepipe.h"

namespace ctrnet {

// A split after hashing: sparse ID vectors plus the dense tail, row-aligned.
struct VectorizedDataset {
  HashConfig hash;
  std::vector<SparseVector> rows;
  std::vector<std::uint8_t> labels;
  std::vector<double> bids;
  std::size_t real_dim = 0;
  std::vector<double> real;  // rows() x real_dim, row-major

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::span<const double> real_row(std::size_t i) const {
    return std::span<const double>(real).subspan(i * real_dim, real_dim);
  }

  VectorizedDataset subset(std::span<const std::size_t> indices) const;
  VectorizedDataset prefix(std::size_t n) const;

  // Binary, little-endian: magic "CTRDSET1", dimension, hash seed, row count,
  // real_dim, then per row label, bid, nnz, indices, values, dense features.
  void save(const std::filesystem::path& path) const;
  static VectorizedDataset load(const std::filesystem::path& path);
};

VectorizedDataset vectorize_all(std::span<const ImpressionRecord> records, const KeptSet& kept,
                                const HashConfig& hash);

}  // namespace ctrnet
