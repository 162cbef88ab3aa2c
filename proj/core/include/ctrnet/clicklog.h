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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctrnet {

// Declared namespaces of a click log plus the width of its dense tail.
struct NamespaceSchema {
  std::vector<std::string> names;
  std::size_t real_dim = 0;

  // The ten ID-feature kinds of the ad logs, with the five dense columns the
  // synthetic generator emits.
  static NamespaceSchema defaults();

  bool contains(std::string_view name) const;
  void validate() const;
};

// One ad impression.
struct ImpressionRecord {
  int label = 0;
  double bid = 0.0;
  // Namespace name -> feature strings, in the order they appear.
  std::map<std::string, std::vector<std::string>> id_features;
  std::vector<double> real_features;

  // Absent and empty namespaces compare equal.
  friend bool operator==(const ImpressionRecord& a, const ImpressionRecord& b);
};

// Throws SchemaError when a feature string or namespace name is not writable.
void validate_record(const ImpressionRecord& record, const NamespaceSchema& schema);

// Grammar: `<label> <bid> |<ns> <feat>... |<ns> <feat>... # <f1>,<f2>,...`
// Every schema namespace is present in the result (empty when not on the line).
ImpressionRecord parse_line(std::string_view line, const NamespaceSchema& schema,
                            std::size_t line_number = 0);

// Inverse of parse_line. Namespaces in schema order, empty ones omitted,
// numbers in shortest round-trip form.
std::string write_line(const ImpressionRecord& record, const NamespaceSchema& schema);

// Reads a whole log (gzip when the name ends in `.gz`). All records must carry
// the same number of dense features.
std::vector<ImpressionRecord> read_click_log(const std::filesystem::path& path,
                                             const NamespaceSchema& schema);
void write_click_log(const std::filesystem::path& path, std::span<const ImpressionRecord> records,
                     const NamespaceSchema& schema);

struct GeneratorConfig {
  std::uint64_t n_impressions = 100000;
  std::uint64_t n_users = 20000;
  std::uint64_t n_ads = 5000;
  std::uint64_t n_queries = 3000;
  double zipf_exponent = 1.0;
  double base_ctr = 0.1;
  // Weight of the pairwise latent-group terms; 0 gives a purely linear logit.
  double interaction_strength = 1.0;
  // Standard deviation of the hidden per-entity linear weights.
  double weight_scale = 0.5;
  // Standard deviation of the per-entity noise on the dense CTR aggregates.
  double dense_noise = 0.02;
  std::uint64_t seed = 42;

  void validate() const;
};

inline constexpr std::size_t kGeneratedRealDim = 5;

struct GeneratedLog {
  std::vector<ImpressionRecord> records;
  // Exact click probability of every record.
  std::vector<double> oracle_ctrs;
};

// Synthetic click log with a known ground-truth CTR. Deterministic given the
// config. Only namespaces declared in `schema` are emitted; schema.real_dim
// must be 0 (no dense tail) or kGeneratedRealDim.
GeneratedLog generate(const GeneratorConfig& config, const NamespaceSchema& schema);

void write_oracle(const std::filesystem::path& path, std::span<const double> ctrs);
std::vector<double> read_oracle(const std::filesystem::path& path);

struct SplitRatios {
  double train = 0.7;
  double valid = 0.2;
  double test = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

// Seeded random partition of [0, n). Valid and test sizes are floor(n * ratio);
// the remainder goes to train.
SplitIndices split_indices(std::size_t n, const SplitRatios& ratios);

template <typename T>
struct Split {
  std::vector<T> train;
  std::vector<T> valid;
  std::vector<T> test;
};

template <typename T>
Split<T> split(std::span<const T> items, const SplitRatios& ratios) {
  const SplitIndices idx = split_indices(items.size(), ratios);
  Split<T> out;
  for (std::size_t i : idx.train) out.train.push_back(items[i]);
  for (std::size_t i : idx.valid) out.valid.push_back(items[i]);
  for (std::size_t i : idx.test) out.test.push_back(items[i]);
  return out;
}

}  // namespace ctrnet
