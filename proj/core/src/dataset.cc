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

#include "ctrnet/dataset.h"

#include "ctrnet/binary_io.h"
#include "ctrnet/error.h"

namespace ctrnet {

namespace {
constexpr std::string_view kDatasetMagic = "CTRDSET1";
}

VectorizedDataset VectorizedDataset::subset(std::span<const std::size_t> indices) const {
  VectorizedDataset out;
  out.hash = hash;
  out.real_dim = real_dim;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) {
    out.rows.push_back(rows.at(i));
    out.labels.push_back(labels[i]);
    out.bids.push_back(bids[i]);
    const auto r = real_row(i);
    out.real.insert(out.real.end(), r.begin(), r.end());
  }
  return out;
}

VectorizedDataset VectorizedDataset::prefix(std::size_t n) const {
  std::vector<std::size_t> idx(std::min(n, size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return subset(idx);
}

void VectorizedDataset::save(const std::filesystem::path& path) const {
  BinaryWriter w;
  w.magic(kDatasetMagic);
  w.u64(hash.dimension);
  w.u64(hash.seed);
  w.u64(rows.size());
  w.u64(real_dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    w.u8(labels[i]);
    w.f64(bids[i]);
    w.u32(static_cast<std::uint32_t>(rows[i].size()));
    w.u32s(rows[i].indices);
    w.f64s(rows[i].values);
    w.f64s(real_row(i));
  }
  w.save(path);
}

VectorizedDataset VectorizedDataset::load(const std::filesystem::path& path) {
  BinaryReader r = BinaryReader::from_file(path);
  r.expect_magic(kDatasetMagic);
  VectorizedDataset ds;
  ds.hash.dimension = r.u64();
  ds.hash.seed = r.u64();
  const std::uint64_t n = r.u64();
  ds.real_dim = r.u64();
  ds.rows.resize(n);
  ds.labels.resize(n);
  ds.bids.resize(n);
  ds.real.resize(n * ds.real_dim);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = r.u8();
    if (ds.labels[i] > 1) throw IoError("corrupt dataset label");
    ds.bids[i] = r.f64();
    const std::uint32_t nnz = r.u32();
    ds.rows[i].indices.resize(nnz);
    ds.rows[i].values.resize(nnz);
    r.u32s(ds.rows[i].indices);
    r.f64s(ds.rows[i].values);
    r.f64s(std::span<double>(ds.real).subspan(i * ds.real_dim, ds.real_dim));
    ds.rows[i].check(ds.hash.dimension);
  }
  if (!r.at_end()) throw IoError("trailing bytes in dataset " + path.string());
  return ds;
}

VectorizedDataset vectorize_all(std::span<const ImpressionRecord> records, const KeptSet& kept,
                                const HashConfig& hash) {
  hash.validate();
  VectorizedDataset ds;
  ds.hash = hash;
  ds.real_dim = records.empty() ? 0 : records.front().real_features.size();
  ds.rows.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.real_features.size() != ds.real_dim) {
      throw DimensionError("records disagree on dense feature count");
    }
    ds.rows.push_back(vectorize(rec, kept, hash));
    ds.labels.push_back(static_cast<std::uint8_t>(rec.label));
    ds.bids.push_back(rec.bid);
    ds.real.insert(ds.real.end(), rec.real_features.begin(), rec.real_features.end());
  }
  return ds;
}

}  // namespace ctrnet
