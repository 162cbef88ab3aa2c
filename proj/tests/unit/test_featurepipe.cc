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

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ctrnet/dataset.h"
#include "ctrnet/error.h"
#include "ctrnet/featurepipe.h"
#include "test_util.h"

namespace ctrnet {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ImpressionRecord with(std::map<std::string, std::vector<std::string>> feats) {
  ImpressionRecord r;
  r.id_features = std::move(feats);
  return r;
}

TEST(Fnv, ReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
  EXPECT_EQ(qualify("user_id", "u1"), "user_id^u1");
}

TEST(HashConfig, IndexAndValidation) {
  const HashConfig h{1000, 0};
  EXPECT_EQ(h.index("a"), 0xaf63dc4c8601ec8cull % 1000);
  const HashConfig salted{1000, 12345};
  EXPECT_EQ(salted.index("a"), (0xaf63dc4c8601ec8cull ^ 12345ull) % 1000);
  EXPECT_THROW((HashConfig{1, 0}.validate()), ConfigError);
  EXPECT_NO_THROW((HashConfig{2, 0}.validate()));
}

TEST(CountFeatures, Basics) {
  std::vector<ImpressionRecord> recs(3, with({{"user_id", {"u1"}}}));
  const VocabStats s = count_features(recs);
  EXPECT_EQ(s.counts.at("user_id^u1"), 3u);
  EXPECT_EQ(s.total_unique(), 1u);
  EXPECT_EQ(count_features({}).total_unique(), 0u);

  // Same string in two namespaces stays distinct; repeats in one line count twice.
  const VocabStats t = count_features(std::vector{with({{"ad_title_words", {"x", "x"}},
                                                        {"ad_body_words", {"x"}}})});
  EXPECT_EQ(t.counts.at("ad_title_words^x"), 2u);
  EXPECT_EQ(t.counts.at("ad_body_words^x"), 1u);
}

TEST(CountFeatures, ShardMergeEqualsWhole) {
  const auto recs = read_click_log(testing::fixture("clicks_1000.log"), NamespaceSchema::defaults());
  const VocabStats whole = count_features(recs);
  VocabStats a = count_features(std::span(recs).first(317));
  a.merge(count_features(std::span(recs).subspan(317)));
  EXPECT_EQ(a.counts, whole.counts);
  for (const auto& [k, v] : whole.counts) EXPECT_GE(v, 1u) << k;
}

TEST(CountFeatures, FixtureMatchesIndependentTally) {
  const auto recs = read_click_log(testing::fixture("clicks_1000.log"), NamespaceSchema::defaults());
  testing::TempDir dir("fp");
  const VocabStats stats = count_features(recs);
  write_counts_tsv(dir / "counts.tsv", stats.counts);
  EXPECT_EQ(slurp(dir / "counts.tsv"), slurp(testing::fixture("expected_counts.tsv")));

  const KeptSet kept = prune(stats, PruneConfig{10});
  write_counts_tsv(dir / "kept.tsv", kept.counts());
  EXPECT_EQ(slurp(dir / "kept.tsv"), slurp(testing::fixture("expected_kept_tau10.tsv")));
  EXPECT_EQ(read_counts_tsv(dir / "kept.tsv"), kept.counts());
}

TEST(Prune, BoundaryAndIdentity) {
  VocabStats s;
  s.counts = {{"a", 10}, {"b", 9}};
  const KeptSet k = prune(s, PruneConfig{10});
  EXPECT_TRUE(k.contains("a"));
  EXPECT_FALSE(k.contains("b"));
  EXPECT_EQ(prune(s, PruneConfig{1}).counts(), s.counts);
  EXPECT_THROW(PruneConfig{0}.validate(), ConfigError);
}

TEST(Prune, MonotoneInThreshold) {
  const auto recs = read_click_log(testing::fixture("clicks_1000.log"), NamespaceSchema::defaults());
  const VocabStats stats = count_features(recs);
  std::size_t last = stats.total_unique() + 1;
  for (std::uint64_t tau = 1; tau <= 64; tau *= 2) {
    const KeptSet hi = prune(stats, PruneConfig{tau * 2});
    const KeptSet lo = prune(stats, PruneConfig{tau});
    for (const auto& [k, v] : hi.counts()) EXPECT_TRUE(lo.contains(k)) << k;
    EXPECT_LE(lo.size(), last);
    last = lo.size();
  }
}

TEST(Vectorize, EmptyAndDeterministic) {
  const HashConfig h{100000, 0};
  const auto r = with({{"user_id", {"u1", "u2"}}, {"ad_id", {"a1"}}});
  EXPECT_TRUE(vectorize(r, KeptSet{}, h).empty());

  VocabStats s;
  s.add(r);
  const KeptSet kept = prune(s, PruneConfig{1});
  const SparseVector v = vectorize(r, kept, h);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v, vectorize(r, kept, h));
  const auto permuted = with({{"user_id", {"u2", "u1"}}, {"ad_id", {"a1"}}});
  EXPECT_EQ(v, vectorize(permuted, kept, h));
}

TEST(Vectorize, BruteForceMod7) {
  Rng rng(11);
  const HashConfig h{7, 0};
  for (int trial = 0; trial < 200; ++trial) {
    ImpressionRecord r;
    FeatureCounts all;
    std::map<std::uint32_t, double> oracle;
    for (int i = 0; i < 20; ++i) {
      const std::string ns = NamespaceSchema::defaults().names[rng.below(10)];
      const std::string f = testing::random_token(rng);
      r.id_features[ns].push_back(f);
      all[qualify(ns, f)] = 1;
      oracle[static_cast<std::uint32_t>(fnv1a64(qualify(ns, f)) % 7)] += 1.0;
    }
    const SparseVector v = vectorize(r, KeptSet(all), h);
    std::map<std::uint32_t, double> got;
    for (std::size_t i = 0; i < v.size(); ++i) got[v.indices[i]] = v.values[i];
    EXPECT_EQ(got, oracle);
  }
}

// Range, order, mass conservation and per-namespace linearity on many random records.
TEST(Vectorize, Properties) {
  Rng rng(5);
  const NamespaceSchema schema = NamespaceSchema::defaults();
  for (int trial = 0; trial < 20000; ++trial) {
    const HashConfig h{2 + rng.below(5000), rng.next()};
    const ImpressionRecord r = testing::random_record(rng, schema);
    VocabStats s;
    s.add(r);
    // Keep roughly half the features.
    FeatureCounts keep;
    std::size_t kept_occurrences = 0;
    for (const auto& [k, c] : s.counts) {
      if (rng.bernoulli(0.5)) keep[k] = c;
    }
    for (const auto& [ns, feats] : r.id_features) {
      for (const auto& f : feats) kept_occurrences += keep.count(qualify(ns, f));
    }
    const KeptSet kept(keep);
    const SparseVector v = vectorize(r, kept, h);
    ASSERT_NO_THROW(v.check(h.dimension));
    double mass = 0.0;
    for (double x : v.values) {
      EXPECT_NE(x, 0.0);
      mass += x;
    }
    EXPECT_EQ(mass, static_cast<double>(kept_occurrences));

    SparseVector sum;
    for (const auto& [ns, feats] : r.id_features) {
      sum = merge_add(sum, vectorize(with({{ns, feats}}), kept, h));
    }
    EXPECT_EQ(sum, v);
  }
}

TEST(SparseVector, FromPairsAndCheck) {
  const auto v = SparseVector::from_pairs({{5, 1.0}, {2, 1.0}, {5, 2.0}, {3, 0.0}});
  EXPECT_EQ(v.indices, (std::vector<std::uint32_t>{2, 5}));
  EXPECT_EQ(v.values, (std::vector<double>{1.0, 3.0}));
  EXPECT_THROW(v.check(5), DimensionError);
  SparseVector bad{{3, 2}, {1.0, 1.0}};
  EXPECT_THROW(bad.check(10), DimensionError);
}

TEST(CrossQuadratic, Examples) {
  NamespaceSchema s = NamespaceSchema::defaults();
  const std::vector<std::pair<std::string, std::string>> pairs{{"user_id", "ad_id"}};
  auto r = with({{"user_id", {"x"}}, {"ad_id", {"y", "z"}}});
  auto out = cross_quadratic(r, s, pairs);
  EXPECT_EQ(out.id_features.at("user_id*ad_id"), (std::vector<std::string>{"x&y", "x&z"}));

  out = cross_quadratic(with({{"ad_id", {"y"}}}), s, pairs);
  EXPECT_TRUE(out.id_features["user_id*ad_id"].empty());

  out = cross_quadratic(with({{"user_id", {"a", "b", "c"}}, {"ad_id", {"1", "2", "3", "4"}}}), s,
                        pairs);
  EXPECT_EQ(out.id_features.at("user_id*ad_id").size(), 12u);

  const std::vector<std::pair<std::string, std::string>> unknown{{"user_id", "nope"}};
  EXPECT_THROW(cross_quadratic(r, s, unknown), SchemaError);

  const NamespaceSchema ext = with_crosses(s, pairs);
  EXPECT_TRUE(ext.contains("user_id*ad_id"));
  // Crossed records survive a text round trip under the extended schema.
  const auto crossed = cross_quadratic(r, s, pairs);
  EXPECT_EQ(parse_line(write_line(crossed, ext), ext), crossed);
}

TEST(Dataset, SaveLoadRoundTrip) {
  const auto recs = read_click_log(testing::fixture("clicks_1000.log"), NamespaceSchema::defaults());
  const KeptSet kept = prune(count_features(recs), PruneConfig{10});
  const VectorizedDataset ds = vectorize_all(recs, kept, HashConfig{5000, 3});
  testing::TempDir dir("ds");
  ds.save(dir / "a.ds");
  const VectorizedDataset back = VectorizedDataset::load(dir / "a.ds");
  EXPECT_EQ(back.hash, ds.hash);
  EXPECT_EQ(back.rows, ds.rows);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.bids, ds.bids);
  EXPECT_EQ(back.real, ds.real);
  EXPECT_EQ(back.real_dim, 5u);

  const std::vector<std::size_t> idx{4, 0, 9};
  const VectorizedDataset sub = ds.subset(idx);
  EXPECT_EQ(sub.rows[0], ds.rows[4]);
  EXPECT_EQ(sub.real_row(2)[0], ds.real_row(9)[0]);
  EXPECT_EQ(ds.prefix(10).size(), 10u);
}

}  // namespace
}  // namespace ctrnet
