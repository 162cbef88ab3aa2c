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

#include "ctrnet/auction.h"
#include "ctrnet/error.h"
#include "ctrnet/random.h"
#include "ctrnet/text_io.h"
#include "test_util.h"

namespace ctrnet {
namespace {

std::vector<std::string> ids(const std::vector<AdCandidate>& ads) {
  std::vector<std::string> out;
  for (const auto& a : ads) out.push_back(a.ad_id);
  return out;
}

// True when a should be ranked before b by revenue with the full tie-break chain.
bool revenue_before(const AdCandidate& a, const AdCandidate& b) {
  if (a.revenue() != b.revenue()) return a.revenue() > b.revenue();
  if (a.bid != b.bid) return a.bid > b.bid;
  return a.ad_id < b.ad_id;
}

TEST(SelectAds, HandEvaluatedExample) {
  const std::vector<AdCandidate> c{
      {"a", 2, 0.1}, {"b", 1, 0.3}, {"c", 4, 0.01}, {"d", 1, 0.25}};
  EXPECT_EQ(ids(select_ads(c)), (std::vector<std::string>{"a", "b", "d"}));
  EXPECT_EQ(ids(select_ads(c, 1)), (std::vector<std::string>{"b"}));
}

TEST(SelectAds, SmallCases) {
  EXPECT_TRUE(select_ads({}).empty());
  const std::vector<AdCandidate> one{{"x", 1.5, 0.2}};
  EXPECT_EQ(select_ads(one), one);
  const std::vector<AdCandidate> tie{{"z", 1, 0.2}, {"y", 1, 0.2}};
  EXPECT_EQ(ids(select_ads(tie)), (std::vector<std::string>{"y", "z"}));
  // Equal revenue, different bids: the higher bid survives a k=1 cut.
  const std::vector<AdCandidate> rev_tie{{"lo", 1, 0.4}, {"hi", 2, 0.2}};
  EXPECT_EQ(ids(select_ads(rev_tie, 1)), (std::vector<std::string>{"hi"}));
  EXPECT_THROW(select_ads(one, 0), ConfigError);
  const std::vector<AdCandidate> bad{{"x", -1, 0.2}};
  EXPECT_THROW(select_ads(bad), Error);
  const std::vector<AdCandidate> bad_ctr{{"x", 1, 1.2}};
  EXPECT_THROW(select_ads(bad_ctr), Error);
}

TEST(SelectAds, Properties) {
  Rng rng(1);
  for (int trial = 0; trial < 5000; ++trial) {
    std::vector<AdCandidate> c;
    const std::size_t n = rng.below(12);
    for (std::size_t i = 0; i < n; ++i) {
      c.push_back({"ad" + std::to_string(i), static_cast<double>(rng.below(5)),
                   static_cast<double>(rng.below(5)) / 10.0});
    }
    const std::size_t k = 1 + rng.below(5);
    const auto out = select_ads(c, k);
    ASSERT_EQ(out.size(), std::min(k, n));
    for (const auto& a : out) EXPECT_NE(std::find(c.begin(), c.end(), a), c.end());
    for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(out[i - 1].bid, out[i].bid);
    for (const auto& x : c) {
      if (std::find(out.begin(), out.end(), x) != out.end()) continue;
      for (const auto& in : out) EXPECT_TRUE(revenue_before(in, x)) << in.ad_id << " " << x.ad_id;
    }
    auto shuffled = c;
    rng.shuffle(std::span<AdCandidate>(shuffled));
    EXPECT_EQ(select_ads(shuffled, k), out);
  }
}

TEST(Candidates, CsvRoundTripAndErrors) {
  testing::TempDir dir("auction");
  const std::vector<AdCandidate> c{{"a", 2, 0.1}, {"b", 0.5, 0.25}};
  write_candidates_csv(dir / "c.csv", c);
  EXPECT_EQ(read_lines(dir / "c.csv")[0], "ad_id,bid,ctr");
  EXPECT_EQ(read_candidates_csv(dir / "c.csv"), c);

  write_text_atomic(dir / "bad.csv", "ad_id,bid,ctr\na,1,0.1\nb,x,0.2\n");
  try {
    read_candidates_csv(dir / "bad.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write_text_atomic(dir / "hdr.csv", "id,bid,ctr\na,1,0.1\n");
  EXPECT_THROW(read_candidates_csv(dir / "hdr.csv"), ParseError);
}

}  // namespace
}  // namespace ctrnet
