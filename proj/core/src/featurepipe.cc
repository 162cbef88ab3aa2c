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

#include "ctrnet/featurepipe.h"

#include <algorithm>

#include "ctrnet/error.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string qualify(std::string_view ns, std::string_view feature) {
  std::string key;
  key.reserve(ns.size() + feature.size() + 1);
  key.append(ns);
  key.push_back('^');
  key.append(feature);
  return key;
}

void HashConfig::validate() const {
  if (dimension < 2) throw ConfigError("hash dimension must be >= 2");
  if (dimension > (1ULL << 32)) throw ConfigError("hash dimension must fit in 32 bits");
}

std::uint32_t HashConfig::index(std::string_view qualified_key) const {
  return static_cast<std::uint32_t>((fnv1a64(qualified_key) ^ seed) % dimension);
}

SparseVector SparseVector::from_pairs(std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out;
  for (const auto& [idx, val] : entries) {
    if (!out.indices.empty() && out.indices.back() == idx) {
      out.values.back() += val;
    } else {
      out.indices.push_back(idx);
      out.values.push_back(val);
    }
  }
  std::size_t w = 0;
  for (std::size_t r = 0; r < out.indices.size(); ++r) {
    if (out.values[r] == 0.0) continue;
    out.indices[w] = out.indices[r];
    out.values[w] = out.values[r];
    ++w;
  }
  out.indices.resize(w);
  out.values.resize(w);
  return out;
}

void SparseVector::check(std::uint64_t dim) const {
  if (indices.size() != values.size()) throw DimensionError("index/value length mismatch");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dim) {
      throw DimensionError("index " + std::to_string(indices[i]) + " >= dimension " +
                           std::to_string(dim));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) throw DimensionError("indices not increasing");
  }
}

SparseVector merge_add(const SparseVector& a, const SparseVector& b) {
  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) entries.emplace_back(a.indices[i], a.values[i]);
  for (std::size_t i = 0; i < b.size(); ++i) entries.emplace_back(b.indices[i], b.values[i]);
  return SparseVector::from_pairs(std::move(entries));
}

void VocabStats::add(const ImpressionRecord& record) {
  for (const auto& [ns, feats] : record.id_features) {
    for (const auto& f : feats) ++counts[qualify(ns, f)];
  }
}

void VocabStats::merge(const VocabStats& other) {
  for (const auto& [key, c] : other.counts) counts[key] += c;
}

VocabStats count_features(std::span<const ImpressionRecord> records) {
  VocabStats stats;
  for (const auto& r : records) stats.add(r);
  return stats;
}

void PruneConfig::validate() const {
  if (threshold < 1) throw ConfigError("prune threshold must be >= 1");
}

KeptSet prune(const VocabStats& stats, const PruneConfig& config) {
  config.validate();
  FeatureCounts kept;
  for (const auto& [key, c] : stats.counts) {
    if (c >= config.threshold) kept.emplace(key, c);
  }
  return KeptSet(std::move(kept));
}

SparseVector vectorize(const ImpressionRecord& record, const KeptSet& kept,
                       const HashConfig& hash) {
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (const auto& [ns, feats] : record.id_features) {
    for (const auto& f : feats) {
      const std::string key = qualify(ns, f);
      if (kept.contains(key)) entries.emplace_back(hash.index(key), 1.0);
    }
  }
  return SparseVector::from_pairs(std::move(entries));
}

ImpressionRecord cross_quadratic(const ImpressionRecord& record, const NamespaceSchema& schema,
                                 std::span<const std::pair<std::string, std::string>> pairs) {
  ImpressionRecord out = record;
  const auto lookup = [&](const std::string& ns) -> const std::vector<std::string>& {
    static const std::vector<std::string> kEmpty;
    if (!schema.contains(ns)) throw SchemaError("unknown namespace '" + ns + "'");
    auto it = record.id_features.find(ns);
    return it == record.id_features.end() ? kEmpty : it->second;
  };
  for (const auto& [a, b] : pairs) {
    const auto& fa = lookup(a);
    const auto& fb = lookup(b);
    auto& crossed = out.id_features[a + "*" + b];
    crossed.clear();
    crossed.reserve(fa.size() * fb.size());
    for (const auto& x : fa) {
      for (const auto& y : fb) crossed.push_back(x + "&" + y);
    }
  }
  return out;
}

NamespaceSchema with_crosses(const NamespaceSchema& schema,
                             std::span<const std::pair<std::string, std::string>> pairs) {
  NamespaceSchema out = schema;
  for (const auto& [a, b] : pairs) {
    if (!schema.contains(a)) throw SchemaError("unknown namespace '" + a + "'");
    if (!schema.contains(b)) throw SchemaError("unknown namespace '" + b + "'");
    out.names.push_back(a + "*" + b);
  }
  out.validate();
  return out;
}

void write_counts_tsv(const std::filesystem::path& path, const FeatureCounts& counts) {
  std::vector<std::pair<std::string_view, std::uint64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end());
  LineWriter writer(path);
  std::string line;
  for (const auto& [key, c] : rows) {
    line.assign(key);
    line += '\t';
    line += std::to_string(c);
    writer.write_line(line);
  }
  writer.commit();
}

FeatureCounts read_counts_tsv(const std::filesystem::path& path) {
  LineReader reader(path);
  FeatureCounts counts;
  std::string line;
  while (reader.next(line)) {
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError("expected feature<TAB>count", reader.line_number());
    const auto c = parse_u64(std::string_view(line).substr(tab + 1));
    if (!c || *c == 0) throw ParseError("bad count", reader.line_number());
    counts.emplace(line.substr(0, tab), *c);
  }
  return counts;
}

}  // namespace ctrnet
