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


#include "ctrnet/treeboost.h"

#include <algorithm>
#include <cmath>

#include "ctrnet/binary_io.h"
#include "ctrnet/error.h"
#include "ctrnet/metrics.h"
#include "ctrnet/numeric.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

namespace {

constexpr std::string_view kGbdtMagic = "CTRGBDT1";
constexpr std::uint32_t kGbdtVersion = 1;

// Number of thresholds strictly below x, i.e. how many splits send x right.
std::uint32_t bin_of(const std::vector<double>& thr, double x) {
  return static_cast<std::uint32_t>(std::lower_bound(thr.begin(), thr.end(), x) - thr.begin());
}

double newton_term(double g, double h, double l2) { return g * g / (h + l2); }

}  // namespace

void DenseMatrix::validate() const {
  if (values.size() != rows * cols) throw DimensionError("dense matrix is not rectangular");
  if (column_names.size() != cols) throw DimensionError("dense matrix column names");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw Error("non-finite dense value at row " + std::to_string(k / cols) + ", column " +
                  column_names[k % cols] + " (missing values are not supported)");
    }
  }
}

DenseMatrix dense_features(const VectorizedDataset& data) {
  DenseMatrix m;
  m.rows = data.size();
  m.cols = data.real_dim;
  m.values = data.real;
  for (std::size_t j = 0; j < m.cols; ++j) m.column_names.push_back("real_" + std::to_string(j));
  m.validate();
  return m;
}

DenseMatrix stack(const DenseMatrix& base, std::span<const NamedColumn> columns) {
  base.validate();
  for (const auto& c : columns) {
    if (c.values.size() != base.rows) {
      throw DimensionError("column " + c.name + " has " + std::to_string(c.values.size()) +
                           " values for " + std::to_string(base.rows) + " rows");
    }
    for (double v : c.values) {
      if (!(v > 0.0 && v < 1.0)) throw Error("column " + c.name + " has a value outside (0,1)");
    }
  }
  DenseMatrix out;
  out.rows = base.rows;
  out.cols = base.cols + columns.size();
  out.column_names = base.column_names;
  for (const auto& c : columns) out.column_names.push_back(c.name);
  out.values.reserve(out.rows * out.cols);
  for (std::size_t i = 0; i < base.rows; ++i) {
    const auto r = base.row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
    for (const auto& c : columns) out.values.push_back(c.values[i]);
  }
  return out;
}

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m,
                      std::span<const std::uint8_t> labels) {
  if (!labels.empty() && labels.size() != m.rows) throw DimensionError("matrix labels length");
  LineWriter w(path);
  std::string header = labels.empty() ? "" : "label";
  for (const auto& name : m.column_names) {
    if (!header.empty()) header += ',';
    header += name;
  }
  w.write_line(header);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::string line = labels.empty() ? "" : std::to_string(labels[i]);
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (!line.empty() || j > 0) line += ',';
      line += format_double(m.at(i, j));
    }
    w.write_line(line);
  }
  w.commit();
}

ThresholdTable build_bins(const DenseMatrix& m, std::size_t bins) {
  if (bins < 2) throw ConfigError("bins must be >= 2");
  m.validate();
  if (m.rows == 0) throw Error("build_bins needs at least one row");
  ThresholdTable table(m.cols);
  std::vector<double> col(m.rows);
  const std::size_t n = m.rows;
  for (std::size_t f = 0; f < m.cols; ++f) {
    for (std::size_t i = 0; i < n; ++i) col[i] = m.at(i, f);
    std::sort(col.begin(), col.end());
    if (col.front() == col.back()) continue;
    std::vector<double>& thr = table[f];
    for (std::size_t j = 1; j < bins; ++j) {
      const std::size_t idx = std::clamp<std::size_t>(j * n / bins, 1, n - 1);
      const double v = col[idx - 1];
      if (v == col.back()) continue;
      const double next = *std::upper_bound(col.begin(), col.end(), v);
      double t = v + (next - v) / 2;
      if (!(t < next)) t = v;
      if (thr.empty() || t > thr.back()) thr.push_back(t);
    }
  }
  return table;
}

std::size_t ObliviousTree::leaf_index(std::span<const double> row) const {
  std::size_t idx = 0;
  for (std::size_t l = 0; l < depth; ++l) {
    idx = (idx << 1) | static_cast<std::size_t>(row[features[l]] > thresholds[l]);
  }
  return idx;
}

std::size_t leaf_index_by_traversal(const ObliviousTree& tree, std::span<const double> row) {
  // Heap-style walk: node 1 is the root, children of n are 2n and 2n+1.
  std::size_t node = 1;
  for (std::size_t l = 0; l < tree.depth; ++l) {
    const bool right = row[tree.features[l]] > tree.thresholds[l];
    node = right ? 2 * node + 1 : 2 * node;
  }
  return node - (std::size_t{1} << tree.depth);
}

ObliviousTree fit_tree(std::span<const double> gradients, std::span<const double> hessians,
                       const DenseMatrix& m, const ThresholdTable& thresholds, std::size_t depth,
                       double leaf_l2) {
  const std::size_t n = m.rows;
  if (gradients.size() != n || hessians.size() != n) throw DimensionError("gradient length");
  if (thresholds.size() != m.cols) throw DimensionError("threshold table width");
  if (depth > 20) throw ConfigError("tree depth must be <= 20");
  for (double h : hessians) {
    if (!(h >= 0.0)) throw Error("hessians must be nonnegative");
  }

  // Pre-binned features, column-major.
  std::vector<std::vector<std::uint32_t>> binned(m.cols, std::vector<std::uint32_t>(n));
  for (std::size_t f = 0; f < m.cols; ++f) {
    for (std::size_t i = 0; i < n; ++i) binned[f][i] = bin_of(thresholds[f], m.at(i, f));
  }

  ObliviousTree tree;
  std::vector<std::size_t> leaf(n, 0);
  std::vector<double> hg, hh;
  for (std::size_t level = 0; level < depth; ++level) {
    const std::size_t n_leaves = std::size_t{1} << level;
    bool found = false;
    double best_gain = 0.0;
    std::uint32_t best_f = 0;
    std::size_t best_k = 0;
    for (std::size_t f = 0; f < m.cols; ++f) {
      const std::size_t n_thr = thresholds[f].size();
      if (n_thr == 0) continue;
      const std::size_t n_bins = n_thr + 1;
      hg.assign(n_leaves * n_bins, 0.0);
      hh.assign(n_leaves * n_bins, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cell = leaf[i] * n_bins + binned[f][i];
        hg[cell] += gradients[i];
        hh[cell] += hessians[i];
      }
      // Turn each leaf's histogram into suffix sums: cell b holds rows in bins >= b.
      for (std::size_t l = 0; l < n_leaves; ++l) {
        for (std::size_t b = n_bins - 1; b-- > 0;) {
          hg[l * n_bins + b] += hg[l * n_bins + b + 1];
          hh[l * n_bins + b] += hh[l * n_bins + b + 1];
        }
      }
      for (std::size_t k = 0; k < n_thr; ++k) {
        double gain = 0.0;
        for (std::size_t l = 0; l < n_leaves; ++l) {
          const double g = hg[l * n_bins], h = hh[l * n_bins];
          const double gr = hg[l * n_bins + k + 1], hr = hh[l * n_bins + k + 1];
          gain += newton_term(g - gr, h - hr, leaf_l2) + newton_term(gr, hr, leaf_l2) -
                  newton_term(g, h, leaf_l2);
        }
        if (!found || gain > best_gain) {
          found = true;
          best_gain = gain;
          best_f = static_cast<std::uint32_t>(f);
          best_k = k;
        }
      }
    }
    if (!found || (level == 0 && !(best_gain > 0.0))) break;
    tree.features.push_back(best_f);
    tree.thresholds.push_back(thresholds[best_f][best_k]);
    tree.depth = level + 1;
    for (std::size_t i = 0; i < n; ++i) {
      leaf[i] = (leaf[i] << 1) | static_cast<std::size_t>(binned[best_f][i] > best_k);
    }
  }

  const std::size_t n_leaves = std::size_t{1} << tree.depth;
  std::vector<double> g(n_leaves, 0.0), h(n_leaves, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    g[leaf[i]] += gradients[i];
    h[leaf[i]] += hessians[i];
  }
  tree.leaves.resize(n_leaves);
  for (std::size_t l = 0; l < n_leaves; ++l) {
    tree.leaves[l] = g[l] == 0.0 ? 0.0 : -g[l] / (h[l] + leaf_l2);
  }
  return tree;
}

void BoostConfig::validate() const {
  if (n_trees < 1) throw ConfigError("boost.trees must be >= 1");
  if (depth < 1 || depth > 20) throw ConfigError("boost.depth must be in [1, 20]");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) throw ConfigError("boost.shrinkage must be in (0,1]");
  if (bins < 2) throw ConfigError("boost.bins must be >= 2");
  if (!(leaf_l2 >= 0.0)) throw ConfigError("boost.leaf_l2 must be >= 0");
}

double GbdtModel::raw_score(std::span<const double> row) const {
  if (row.size() != n_features()) {
    throw DimensionError("row has " + std::to_string(row.size()) + " features, model expects " +
                         std::to_string(n_features()));
  }
  double sum = 0.0;
  for (const auto& t : trees) sum += t.value(row);
  return f0 + shrinkage * sum;
}

double GbdtModel::predict(std::span<const double> row) const { return sigmoid(raw_score(row)); }

std::vector<double> GbdtModel::predict_batch(const DenseMatrix& m) const {
  if (m.cols != n_features()) throw DimensionError("matrix width differs from model");
  std::vector<double> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out[i] = predict(m.row(i));
  return out;
}

void GbdtModel::save(const std::filesystem::path& path) const {
  BinaryWriter w;
  w.magic(kGbdtMagic);
  w.u32(kGbdtVersion);
  w.u32(static_cast<std::uint32_t>(column_names.size()));
  for (const auto& name : column_names) {
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name.data(), name.size());
  }
  w.f64(f0);
  w.f64(shrinkage);
  w.u32(static_cast<std::uint32_t>(trees.size()));
  for (const auto& t : trees) {
    w.u32(static_cast<std::uint32_t>(t.depth));
    w.u32s(t.features);
    w.f64s(t.thresholds);
    w.f64s(t.leaves);
  }
  w.save(path);
}

GbdtModel GbdtModel::load(const std::filesystem::path& path) {
  BinaryReader r = BinaryReader::from_file(path);
  r.expect_magic(kGbdtMagic);
  if (r.u32() != kGbdtVersion) throw IoError("unsupported boosted model version");
  GbdtModel m;
  m.column_names.resize(r.u32());
  for (auto& name : m.column_names) {
    const std::uint32_t len = r.u32();
    if (len > r.remaining()) throw IoError("truncated binary file");
    name.resize(len);
    r.bytes(name.data(), len);
  }
  m.f0 = r.f64();
  m.shrinkage = r.f64();
  m.trees.resize(r.u32());
  for (auto& t : m.trees) {
    t.depth = r.u32();
    if (t.depth > 20) throw IoError("corrupt tree depth in " + path.string());
    t.features.resize(t.depth);
    t.thresholds.resize(t.depth);
    t.leaves.resize(std::size_t{1} << t.depth);
    r.u32s(t.features);
    r.f64s(t.thresholds);
    r.f64s(t.leaves);
    for (auto f : t.features) {
      if (f >= m.column_names.size()) throw IoError("tree feature out of range in " + path.string());
    }
  }
  if (!r.at_end()) throw IoError("trailing bytes in " + path.string());
  return m;
}

GbdtTrainResult train_gbdt(const DenseMatrix& m, std::span<const std::uint8_t> labels,
                           const BoostConfig& config) {
  config.validate();
  m.validate();
  if (m.rows == 0) throw Error("cannot boost on an empty matrix");
  if (labels.size() != m.rows) throw DimensionError("labels length differs from matrix rows");
  std::size_t positives = 0;
  for (auto y : labels) positives += y;
  if (positives == 0 || positives == m.rows) {
    throw Error("labels are all " + std::string(positives == 0 ? "0" : "1") +
                "; the initial log-odds would be infinite (check the label column)");
  }
  const double pbar = static_cast<double>(positives) / static_cast<double>(m.rows);

  GbdtTrainResult result;
  GbdtModel& model = result.model;
  model.f0 = std::log(pbar / (1.0 - pbar));
  model.shrinkage = config.shrinkage;
  model.column_names = m.column_names;

  const ThresholdTable thresholds = build_bins(m, config.bins);
  std::vector<double> score(m.rows, model.f0), p(m.rows), g(m.rows), h(m.rows);
  const auto current_nll = [&] {
    for (std::size_t i = 0; i < m.rows; ++i) p[i] = sigmoid(score[i]);
    return nll(make_pairs(p, labels));
  };
  result.train_nll.push_back(current_nll());
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    for (std::size_t i = 0; i < m.rows; ++i) {
      g[i] = p[i] - labels[i];
      h[i] = p[i] * (1.0 - p[i]);
    }
    ObliviousTree tree = fit_tree(g, h, m, thresholds, config.depth, config.leaf_l2);
    for (std::size_t i = 0; i < m.rows; ++i) score[i] += config.shrinkage * tree.value(m.row(i));
    model.trees.push_back(std::move(tree));
    result.train_nll.push_back(current_nll());
  }
  return result;
}

}  // namespace ctrnet
