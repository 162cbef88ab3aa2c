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
#include <vector>

#include "ctrnet/dataset.h"

namespace ctrnet {

// Row-major dense feature matrix with named columns. Every value must be
// finite; missing values are rejected rather than imputed.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::string> column_names;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values).subspan(i * cols, cols);
  }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  void validate() const;
};

// The dense tail of a vectorized split, columns named real_0, real_1, ...
DenseMatrix dense_features(const VectorizedDataset& data);

struct NamedColumn {
  std::string name;
  std::vector<double> values;  // probabilities in (0, 1)
};

// Appends model-output columns in the given order.
DenseMatrix stack(const DenseMatrix& base, std::span<const NamedColumn> columns);

// Headered CSV; an optional label column is written first.
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m,
                      std::span<const std::uint8_t> labels = {});

using ThresholdTable = std::vector<std::vector<double>>;

// Per-feature split candidates at empirical quantiles, ascending, no
// duplicates. A constant column gets no thresholds.
ThresholdTable build_bins(const DenseMatrix& m, std::size_t bins);

struct ObliviousTree {
  std::size_t depth = 0;
  std::vector<std::uint32_t> features;  // one per level
  std::vector<double> thresholds;       // one per level
  std::vector<double> leaves;           // 2^depth

  // Level 0 is the most significant bit; a level contributes 1 when x > threshold.
  std::size_t leaf_index(std::span<const double> row) const;
  double value(std::span<const double> row) const { return leaves[leaf_index(row)]; }
};

// Explicit root-to-leaf walk, kept as a reference for leaf_index.
std::size_t leaf_index_by_traversal(const ObliviousTree& tree, std::span<const double> row);

// Level-wise greedy oblivious tree on Newton gains; ties go to the lowest
// feature, then the lowest threshold. Without a positive-gain split at level 0
// the result is a depth-0 stump.
ObliviousTree fit_tree(std::span<const double> gradients, std::span<const double> hessians,
                       const DenseMatrix& m, const ThresholdTable& thresholds, std::size_t depth,
                       double leaf_l2);

struct BoostConfig {
  std::size_t n_trees = 100;
  std::size_t depth = 6;
  double shrinkage = 0.1;
  std::size_t bins = 32;
  double leaf_l2 = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GbdtModel {
  double f0 = 0.0;
  double shrinkage = 0.1;
  std::vector<ObliviousTree> trees;
  std::vector<std::string> column_names;

  std::size_t n_features() const { return column_names.size(); }
  double raw_score(std::span<const double> row) const;
  double predict(std::span<const double> row) const;
  std::vector<double> predict_batch(const DenseMatrix& m) const;

  // Binary: magic "CTRGBDT1", version, columns, f0, shrinkage, trees.
  void save(const std::filesystem::path& path) const;
  static GbdtModel load(const std::filesystem::path& path);
};

struct GbdtTrainResult {
  GbdtModel model;
  std::vector<double> train_nll;  // after each round; entry 0 is F0 alone
};

GbdtTrainResult train_gbdt(const DenseMatrix& m, std::span<const std::uint8_t> labels,
                           const BoostConfig& config);

}  // namespace ctrnet
