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
#include <cmath>
#include <set>

#include "ctrnet/clicklog.h"
#include "ctrnet/error.h"
#include "ctrnet/text_io.h"
#include "test_util.h"

namespace ctrnet {
namespace {

NamespaceSchema two_dense() {
  NamespaceSchema s = NamespaceSchema::defaults();
  s.real_dim = 2;
  return s;
}

TEST(Schema, DefaultsListTenNamespaces) {
  const NamespaceSchema s = NamespaceSchema::defaults();
  EXPECT_EQ(s.names,
            (std::vector<std::string>{"user_id", "region_id", "ad_id", "campaign_id", "domain_id",
                                      "ad_title_words", "ad_body_words", "ad_position",
                                      "ad_keywords", "query_words"}));
  EXPECT_EQ(s.real_dim, kGeneratedRealDim);
  NamespaceSchema dup = s;
  dup.names.push_back("user_id");
  EXPECT_THROW(dup.validate(), SchemaError);
}

TEST(ParseLine, FullLine) {
  const auto r = parse_line("1 0.50 |user_id u42 |query_words cheap flights # 0.1,0.9", two_dense());
  EXPECT_EQ(r.label, 1);
  EXPECT_EQ(r.bid, 0.5);
  EXPECT_EQ(r.id_features.at("user_id"), (std::vector<std::string>{"u42"}));
  EXPECT_EQ(r.id_features.at("query_words"), (std::vector<std::string>{"cheap", "flights"}));
  EXPECT_TRUE(r.id_features.at("ad_id").empty());
  EXPECT_EQ(r.real_features, (std::vector<double>{0.1, 0.9}));
  EXPECT_EQ(write_line(r, two_dense()), "1 0.5 |user_id u42 |query_words cheap flights # 0.1,0.9");
}

TEST(ParseLine, MinimalLine) {
  const auto r = parse_line("0 0.00 |ad_id a1", NamespaceSchema::defaults());
  EXPECT_EQ(r.label, 0);
  EXPECT_EQ(r.bid, 0.0);
  EXPECT_EQ(r.id_features.at("ad_id"), (std::vector<std::string>{"a1"}));
  EXPECT_EQ(r.id_features.size(), 10u);
  EXPECT_TRUE(r.real_features.empty());

  ImpressionRecord empty;
  EXPECT_EQ(write_line(empty, NamespaceSchema::defaults()), "0 0");
}

TEST(ParseLine, Errors) {
  const auto s = NamespaceSchema::defaults();
  EXPECT_THROW(parse_line("2 0.5 |user_id u1", s), ParseError);
  EXPECT_THROW(parse_line("1 -0.5 |user_id u1", s), ParseError);
  EXPECT_THROW(parse_line("1 abc |user_id u1", s), ParseError);
  EXPECT_THROW(parse_line("1", s), ParseError);
  EXPECT_THROW(parse_line("1 0.5 u1", s), ParseError);
  EXPECT_THROW(parse_line("1 0.5 |no_such_ns u1", s), SchemaError);
  EXPECT_THROW(parse_line("1 0.5 |user_id u1 # 0.1,x", s), ParseError);
  EXPECT_THROW(parse_line("1 0.5 |user_id u|1", s), ParseError);
  try {
    parse_line("7 0.5", s, 42);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 42u);
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
  }
}

TEST(WriteLine, RejectsUnwritableRecords) {
  const auto s = NamespaceSchema::defaults();
  ImpressionRecord r;
  r.id_features["user_id"] = {"has space"};
  EXPECT_THROW(write_line(r, s), SchemaError);
  r.id_features["user_id"] = {"a#b"};
  EXPECT_THROW(write_line(r, s), SchemaError);
  r.id_features["user_id"] = {""};
  EXPECT_THROW(write_line(r, s), SchemaError);
  r.id_features = {{"bogus", {"x"}}};
  EXPECT_THROW(write_line(r, s), SchemaError);
}

TEST(WriteLine, NamespacesInSchemaOrder) {
  ImpressionRecord r;
  r.label = 1;
  r.bid = 1.25;
  r.id_features["query_words"] = {"q"};
  r.id_features["user_id"] = {"u"};
  EXPECT_EQ(write_line(r, NamespaceSchema::defaults()), "1 1.25 |user_id u |query_words q");
}

// parse_line(write_line(r)) == r over random records.
TEST(RoundTrip, RandomRecordsProperty) {
  Rng rng(11);
  const NamespaceSchema schemas[] = {NamespaceSchema::defaults(), two_dense()};
  for (int i = 0; i < 100000; ++i) {
    const auto& schema = schemas[i % 2];
    const ImpressionRecord r = testing::random_record(rng, schema);
    const std::string line = write_line(r, schema);
    const ImpressionRecord back = parse_line(line, schema);
    ASSERT_EQ(back, r) << line;
    ASSERT_EQ(write_line(back, schema), line);
  }
}

TEST(RoundTrip, GeneratedRecords) {
  GeneratorConfig cfg;
  cfg.n_impressions = 1000;
  cfg.n_users = 100;
  cfg.n_ads = 50;
  cfg.n_queries = 40;
  const auto schema = NamespaceSchema::defaults();
  const GeneratedLog log = generate(cfg, schema);
  testing::TempDir dir("roundtrip");
  write_click_log(dir / "log.txt.gz", log.records, schema);
  const auto back = read_click_log(dir / "log.txt.gz", schema);
  ASSERT_EQ(back.size(), 1000u);
  for (std::size_t i = 0; i < back.size(); ++i) ASSERT_EQ(back[i], log.records[i]);
}

TEST(ReadClickLog, RejectsRaggedDenseTail) {
  testing::TempDir dir("ragged");
  write_text_atomic(dir / "log.txt", "1 0.5 |user_id a # 1,2\n0 0.5 |user_id b # 1\n");
  try {
    read_click_log(dir / "log.txt", NamespaceSchema::defaults());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

GeneratorConfig small_config(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n_impressions = 10000;
  cfg.n_users = 2000;
  cfg.n_ads = 500;
  cfg.n_queries = 300;
  cfg.seed = seed;
  return cfg;
}

TEST(Generate, DeterministicBySeed) {
  const auto schema = NamespaceSchema::defaults();
  const GeneratedLog a = generate(small_config(42), schema);
  const GeneratedLog b = generate(small_config(42), schema);
  const GeneratedLog c = generate(small_config(43), schema);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.oracle_ctrs, b.oracle_ctrs);
  EXPECT_NE(a.oracle_ctrs, c.oracle_ctrs);
}

TEST(Generate, PositiveRateAndOracleConsistency) {
  const GeneratedLog log = generate(small_config(42), NamespaceSchema::defaults());
  ASSERT_EQ(log.records.size(), 10000u);
  double clicks = 0, oracle = 0;
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    clicks += log.records[i].label;
    oracle += log.oracle_ctrs[i];
    ASSERT_GT(log.oracle_ctrs[i], 0.0);
    ASSERT_LT(log.oracle_ctrs[i], 1.0);
  }
  const double n = 10000.0;
  const double rate = clicks / n;
  EXPECT_GE(rate, 0.07);
  EXPECT_LE(rate, 0.13);
  EXPECT_NEAR(oracle / n, 0.1, 1e-6);
  const double se = std::sqrt(rate * (1 - rate) / n);
  EXPECT_LE(std::abs(rate - oracle / n), 3 * se);
}

TEST(Generate, RespectsSchema) {
  NamespaceSchema s;
  s.names = {"user_id", "ad_id"};
  s.real_dim = 0;
  const GeneratedLog log = generate(small_config(1), s);
  for (const auto& r : log.records) {
    ASSERT_EQ(r.id_features.size(), 2u);
    ASSERT_EQ(r.id_features.at("user_id").size(), 1u);
    ASSERT_TRUE(r.real_features.empty());
  }
  s.real_dim = 3;
  EXPECT_THROW(generate(small_config(1), s), ConfigError);
}

TEST(Generate, DenseTailLayout) {
  const GeneratedLog log = generate(small_config(5), NamespaceSchema::defaults());
  for (const auto& r : log.records) {
    ASSERT_EQ(r.real_features.size(), kGeneratedRealDim);
    for (int j = 0; j < 3; ++j) {
      ASSERT_GE(r.real_features[j], 0.0);
      ASSERT_LE(r.real_features[j], 1.0);
    }
    ASSERT_EQ(r.real_features[4], r.bid);
    ASSERT_GE(r.bid, 0.01);
    const std::string pos = r.id_features.at("ad_position").at(0);
    ASSERT_EQ(pos, "p" + std::to_string(static_cast<int>(r.real_features[3])));
  }
}

TEST(Generate, InvalidConfigs) {
  const auto s = NamespaceSchema::defaults();
  GeneratorConfig cfg = small_config(1);
  cfg.n_impressions = 0;
  EXPECT_THROW(generate(cfg, s), ConfigError);
  cfg = small_config(1);
  cfg.n_users = 0;
  EXPECT_THROW(generate(cfg, s), ConfigError);
  cfg = small_config(1);
  cfg.base_ctr = 1.0;
  EXPECT_THROW(generate(cfg, s), ConfigError);
  cfg = small_config(1);
  cfg.zipf_exponent = 0.0;
  EXPECT_THROW(generate(cfg, s), ConfigError);
  cfg = small_config(1);
  cfg.interaction_strength = -1.0;
  EXPECT_THROW(generate(cfg, s), ConfigError);
}

TEST(Oracle, FileRoundTrip) {
  testing::TempDir dir("oracle");
  const std::vector<double> ctrs = {0.1, 1e-9, 0.999999, 0.5};
  write_oracle(dir / "o.txt", ctrs);
  EXPECT_EQ(read_oracle(dir / "o.txt"), ctrs);
  write_text_atomic(dir / "bad.txt", "0.2\n1.5\n");
  EXPECT_THROW(read_oracle(dir / "bad.txt"), ParseError);
}

TEST(Split, SizesForTenRecords) {
  SplitRatios r;
  r.seed = 9;
  const SplitIndices idx = split_indices(10, r);
  EXPECT_EQ(idx.train.size(), 7u);
  EXPECT_EQ(idx.valid.size(), 2u);
  EXPECT_EQ(idx.test.size(), 1u);
}

TEST(Split, PartitionProperty) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.below(500);
    SplitRatios r;
    r.valid = rng.uniform(0.05, 0.4);
    r.test = rng.uniform(0.05, 0.4);
    r.train = 1.0 - r.valid - r.test;
    r.seed = rng.next();
    const SplitIndices idx = split_indices(n, r);
    EXPECT_EQ(idx.valid.size(), static_cast<std::size_t>(std::floor(n * r.valid + 1e-9)));
    EXPECT_EQ(idx.test.size(), static_cast<std::size_t>(std::floor(n * r.test + 1e-9)));
    std::vector<std::size_t> all;
    for (const auto* part : {&idx.train, &idx.valid, &idx.test}) {
      all.insert(all.end(), part->begin(), part->end());
    }
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), n);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(all[i], i);
    const SplitIndices again = split_indices(n, r);
    EXPECT_EQ(again.train, idx.train);
    EXPECT_EQ(again.test, idx.test);
  }
}

TEST(Split, Errors) {
  SplitRatios r;
  EXPECT_THROW(split_indices(2, r), SplitError);
  SplitRatios degenerate{1.0, 0.0, 0.0, 0};
  EXPECT_THROW(split_indices(100, degenerate), ConfigError);
  SplitRatios off{0.7, 0.2, 0.2, 0};
  EXPECT_THROW(split_indices(100, off), ConfigError);
}

TEST(Split, TemplateCarriesItems) {
  std::vector<int> items(20);
  for (int i = 0; i < 20; ++i) items[i] = 100 + i;
  const Split<int> s = split(std::span<const int>(items), SplitRatios{});
  EXPECT_EQ(s.train.size() + s.valid.size() + s.test.size(), 20u);
  std::set<int> seen(s.train.begin(), s.train.end());
  seen.insert(s.valid.begin(), s.valid.end());
  seen.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(seen.size(), 20u);
}

}  // namespace
}  // namespace ctrnet
