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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ctrnet {

struct AdCandidate {
  std::string ad_id;
  double bid = 0.0;
  double ctr = 0.0;

  double revenue() const { return bid * ctr; }
  void validate() const;
  friend bool operator==(const AdCandidate&, const AdCandidate&) = default;
};

// Keeps the k candidates with the highest bid * ctr, then orders them by bid
// for display. Ties fall back to the higher bid, then the smaller ad_id.
std::vector<AdCandidate> select_ads(std::span<const AdCandidate> candidates, std::size_t k = 3);

// `ad_id,bid,ctr` with a header row.
std::vector<AdCandidate> read_candidates_csv(const std::filesystem::path& path);
void write_candidates_csv(const std::filesystem::path& path, std::span<const AdCandidate> ads);

}  // namespace ctrnet
