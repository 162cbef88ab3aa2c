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


#include "ctrnet/auction.h"

#include <algorithm>
#include <cmath>

#include "ctrnet/error.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

void AdCandidate::validate() const {
  if (!(bid >= 0.0) || !std::isfinite(bid)) throw Error("ad " + ad_id + ": bid must be >= 0");
  if (!(ctr >= 0.0 && ctr <= 1.0)) throw Error("ad " + ad_id + ": ctr must be in [0,1]");
}

std::vector<AdCandidate> select_ads(std::span<const AdCandidate> candidates, std::size_t k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  for (const auto& c : candidates) c.validate();
  std::vector<AdCandidate> ads(candidates.begin(), candidates.end());
  const auto by_bid = [](const AdCandidate& a, const AdCandidate& b) {
    if (a.bid != b.bid) return a.bid > b.bid;
    return a.ad_id < b.ad_id;
  };
  std::sort(ads.begin(), ads.end(), [&](const AdCandidate& a, const AdCandidate& b) {
    const double ra = a.revenue(), rb = b.revenue();
    if (ra != rb) return ra > rb;
    return by_bid(a, b);
  });
  ads.resize(std::min(k, ads.size()));
  std::sort(ads.begin(), ads.end(), by_bid);
  return ads;
}

std::vector<AdCandidate> read_candidates_csv(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw ParseError("missing header in " + path.string(), 1);
  if (trim(line) != "ad_id,bid,ctr") {
    throw ParseError("expected header ad_id,bid,ctr in " + path.string(), 1);
  }
  std::vector<AdCandidate> out;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_on(line, ',');
    const std::size_t n = reader.line_number();
    if (fields.size() != 3) throw ParseError("expected 3 fields", n);
    AdCandidate c;
    c.ad_id = std::string(trim(fields[0]));
    const auto bid = parse_double(trim(fields[1]));
    const auto ctr = parse_double(trim(fields[2]));
    if (c.ad_id.empty() || !bid || !ctr) throw ParseError("malformed candidate row", n);
    c.bid = *bid;
    c.ctr = *ctr;
    try {
      c.validate();
    } catch (const Error& e) {
      throw ParseError(e.what(), n);
    }
    out.push_back(std::move(c));
  }
  return out;
}

void write_candidates_csv(const std::filesystem::path& path, std::span<const AdCandidate> ads) {
  LineWriter w(path);
  w.write_line("ad_id,bid,ctr");
  for (const auto& a : ads) {
    w.write_line(a.ad_id + "," + format_double(a.bid) + "," + format_double(a.ctr));
  }
  w.commit();
}

}  // namespace ctrnet
