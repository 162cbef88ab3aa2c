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

#include "ctrnet/clicklog.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "ctrnet/error.h"
#include "ctrnet/random.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

namespace {

bool is_token_char_ok(char c) {
  return c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '|' && c != '#';
}

bool is_valid_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_token_char_ok);
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

NamespaceSchema NamespaceSchema::defaults() {
  return NamespaceSchema{{"user_id", "region_id", "ad_id", "campaign_id", "domain_id",
                          "ad_title_words", "ad_body_words", "ad_position", "ad_keywords",
                          "query_words"},
                         kGeneratedRealDim};
}

bool NamespaceSchema::contains(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

void NamespaceSchema::validate() const {
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (!is_valid_token(n)) throw SchemaError("invalid namespace name '" + n + "'");
    if (!seen.insert(n).second) throw SchemaError("duplicate namespace '" + n + "'");
  }
}

bool operator==(const ImpressionRecord& a, const ImpressionRecord& b) {
  if (a.label != b.label || a.bid != b.bid || a.real_features != b.real_features) return false;
  const auto covers = [](const ImpressionRecord& x, const ImpressionRecord& y) {
    for (const auto& [ns, feats] : x.id_features) {
      if (feats.empty()) continue;
      auto it = y.id_features.find(ns);
      if (it == y.id_features.end() || it->second != feats) return false;
    }
    return true;
  };
  return covers(a, b) && covers(b, a);
}

void validate_record(const ImpressionRecord& record, const NamespaceSchema& schema) {
  if (record.label != 0 && record.label != 1) throw SchemaError("label must be 0 or 1");
  if (!(record.bid >= 0.0) || !std::isfinite(record.bid)) {
    throw SchemaError("bid must be finite and nonnegative");
  }
  for (const auto& [ns, feats] : record.id_features) {
    if (!schema.contains(ns)) throw SchemaError("unknown namespace '" + ns + "'");
    for (const auto& f : feats) {
      if (!is_valid_token(f)) throw SchemaError("invalid feature string '" + f + "'");
    }
  }
  for (double v : record.real_features) {
    if (!std::isfinite(v)) throw SchemaError("dense feature is not finite");
  }
}

ImpressionRecord parse_line(std::string_view line, const NamespaceSchema& schema,
                            std::size_t line_number) {
  std::string_view ids = line;
  std::string_view dense;
  bool has_dense = false;
  if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
    ids = line.substr(0, hash);
    dense = trim(line.substr(hash + 1));
    has_dense = true;
  }

  const auto tokens = split_whitespace(ids);
  if (tokens.size() < 2) throw ParseError("expected '<label> <bid>'", line_number);

  ImpressionRecord record;
  if (tokens[0] == "0") {
    record.label = 0;
  } else if (tokens[0] == "1") {
    record.label = 1;
  } else {
    throw ParseError("label must be 0 or 1, got '" + std::string(tokens[0]) + "'", line_number);
  }
  const auto bid = parse_double(tokens[1]);
  if (!bid || *bid < 0.0) {
    throw ParseError("malformed bid '" + std::string(tokens[1]) + "'", line_number);
  }
  record.bid = *bid;

  for (const auto& name : schema.names) record.id_features[name];
  std::vector<std::string>* current = nullptr;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const std::string_view tok = tokens[i];
    if (tok.front() == '|') {
      const std::string name(tok.substr(1));
      if (name.empty()) throw ParseError("empty namespace name", line_number);
      if (!schema.contains(name)) {
        throw SchemaError("line " + std::to_string(line_number) + ": unknown namespace '" +
                          name + "'");
      }
      current = &record.id_features[name];
    } else {
      if (current == nullptr) {
        throw ParseError("feature '" + std::string(tok) + "' outside a namespace block",
                         line_number);
      }
      if (tok.find('|') != std::string_view::npos) {
        throw ParseError("'|' inside feature '" + std::string(tok) + "'", line_number);
      }
      current->emplace_back(tok);
    }
  }

  if (has_dense && !dense.empty()) {
    for (std::string_view part : split_on(dense, ',')) {
      const auto v = parse_double(trim(part));
      if (!v) {
        throw ParseError("non-numeric dense feature '" + std::string(part) + "'", line_number);
      }
      record.real_features.push_back(*v);
    }
  }
  return record;
}

std::string write_line(const ImpressionRecord& record, const NamespaceSchema& schema) {
  validate_record(record, schema);
  std::string out = record.label == 1 ? "1 " : "0 ";
  out += format_double(record.bid);
  for (const auto& name : schema.names) {
    auto it = record.id_features.find(name);
    if (it == record.id_features.end() || it->second.empty()) continue;
    out += " |";
    out += name;
    for (const auto& f : it->second) {
      out += ' ';
      out += f;
    }
  }
  if (!record.real_features.empty()) {
    out += " # ";
    for (std::size_t i = 0; i < record.real_features.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(record.real_features[i]);
    }
  }
  return out;
}

std::vector<ImpressionRecord> read_click_log(const std::filesystem::path& path,
                                             const NamespaceSchema& schema) {
  LineReader reader(path);
  std::vector<ImpressionRecord> records;
  std::string line;
  std::size_t dim = 0;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    records.push_back(parse_line(line, schema, reader.line_number()));
    const std::size_t d = records.back().real_features.size();
    if (records.size() == 1) {
      dim = d;
    } else if (d != dim) {
      throw ParseError("dense feature count " + std::to_string(d) + " differs from " +
                           std::to_string(dim),
                       reader.line_number());
    }
  }
  return records;
}

void write_click_log(const std::filesystem::path& path, std::span<const ImpressionRecord> records,
                     const NamespaceSchema& schema) {
  LineWriter writer(path);
  for (const auto& r : records) writer.write_line(write_line(r, schema));
  writer.commit();
}

void GeneratorConfig::validate() const {
  if (n_impressions == 0) throw ConfigError("n_impressions must be >= 1");
  if (n_users == 0 || n_ads == 0 || n_queries == 0) {
    throw ConfigError("vocabulary sizes must be >= 1");
  }
  if (!(zipf_exponent > 0.0)) throw ConfigError("zipf_exponent must be > 0");
  if (!(base_ctr > 0.0 && base_ctr < 1.0)) throw ConfigError("base_ctr must be in (0,1)");
  if (!(interaction_strength >= 0.0)) throw ConfigError("interaction_strength must be >= 0");
  if (!(weight_scale >= 0.0)) throw ConfigError("weight_scale must be >= 0");
  if (!(dense_noise >= 0.0)) throw ConfigError("dense_noise must be >= 0");
}

namespace {

class ZipfTable {
 public:
  ZipfTable(std::uint64_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
      total += std::pow(static_cast<double>(k + 1), -exponent);
      cdf_[k] = total;
    }
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform();
    return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) -
                                    cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double round6(double v) { return std::round(v * 1e6) / 1e6; }

// Picks a bucket in [0, n) whose parity equals `group`. n must be even.
std::size_t bucket_with_parity(Rng& rng, std::size_t n, int group) {
  return 2 * static_cast<std::size_t>(rng.below(n / 2)) + static_cast<std::size_t>(group);
}

std::size_t even_at_least_two(std::uint64_t n) {
  std::size_t v = std::max<std::size_t>(2, static_cast<std::size_t>(n));
  return v + (v % 2);
}

struct UserEntity {
  double weight;
  int group;
  std::size_t region;
};

struct AdEntity {
  double weight;
  int group;
  std::size_t campaign;
  std::vector<std::size_t> title, body, keywords;
};

struct QueryEntity {
  int group;
  std::size_t topic;
  std::vector<std::size_t> words;
  double linear;
};

std::vector<std::size_t> sample_words(Rng& rng, const ZipfTable& table, std::size_t count) {
  std::vector<std::size_t> words(count);
  for (auto& w : words) w = table.sample(rng);
  return words;
}

void put(ImpressionRecord& r, const NamespaceSchema& schema, const std::string& ns,
         std::string feature) {
  if (schema.contains(ns)) r.id_features[ns].push_back(std::move(feature));
}

}  // namespace

GeneratedLog generate(const GeneratorConfig& config, const NamespaceSchema& schema) {
  config.validate();
  schema.validate();
  if (schema.real_dim != 0 && schema.real_dim != kGeneratedRealDim) {
    throw ConfigError("generator emits " + std::to_string(kGeneratedRealDim) +
                      " dense features; schema declares " + std::to_string(schema.real_dim));
  }

  const double scale = config.weight_scale;
  const std::size_t n_regions = even_at_least_two(config.n_users / 100);
  const std::size_t n_campaigns = even_at_least_two(config.n_ads / 10);
  const std::size_t n_domains = std::max<std::size_t>(1, n_campaigns / 4);
  const std::size_t n_topics = even_at_least_two(config.n_queries / 30);
  const std::size_t n_query_words = std::max<std::size_t>(10, config.n_queries / 2);
  constexpr std::size_t kTitleVocab = 2000, kBodyVocab = 5000, kKeywordVocab = 1000;
  constexpr int kPositions = 4;

  Rng entity_rng(derive_seed(config.seed, "entities"));
  std::vector<double> region_w(n_regions), campaign_w(n_campaigns), topic_w(n_topics),
      qword_w(n_query_words);
  for (auto& w : region_w) w = 0.5 * scale * entity_rng.normal();
  for (auto& w : campaign_w) w = 0.5 * scale * entity_rng.normal();
  for (auto& w : topic_w) w = 0.5 * scale * entity_rng.normal();
  for (auto& w : qword_w) w = 0.5 * scale * entity_rng.normal();

  const ZipfTable title_table(kTitleVocab, 1.0), body_table(kBodyVocab, 1.0),
      keyword_table(kKeywordVocab, 1.0), qword_table(n_query_words, 1.0);

  std::vector<UserEntity> users(config.n_users);
  for (auto& u : users) {
    u.weight = scale * entity_rng.normal();
    u.group = entity_rng.bernoulli(0.5) ? 1 : 0;
    u.region = bucket_with_parity(entity_rng, n_regions, u.group);
  }
  std::vector<AdEntity> ads(config.n_ads);
  for (auto& a : ads) {
    a.weight = scale * entity_rng.normal();
    a.group = entity_rng.bernoulli(0.5) ? 1 : 0;
    a.campaign = bucket_with_parity(entity_rng, n_campaigns, a.group);
    a.title = sample_words(entity_rng, title_table, 3);
    a.body = sample_words(entity_rng, body_table, 5);
    a.keywords = sample_words(entity_rng, keyword_table, 2);
  }
  std::vector<QueryEntity> queries(config.n_queries);
  for (auto& q : queries) {
    q.group = entity_rng.bernoulli(0.5) ? 1 : 0;
    q.topic = bucket_with_parity(entity_rng, n_topics, q.group);
    q.words = sample_words(entity_rng, qword_table, 2);
    q.linear = topic_w[q.topic];
    for (std::size_t w : q.words) q.linear += qword_w[w];
  }

  struct Draw {
    std::size_t user, ad, query;
    int position;
    double bid;
  };
  const std::size_t n = static_cast<std::size_t>(config.n_impressions);
  std::vector<Draw> draws(n);
  std::vector<double> logit_wo_bias(n);
  {
    Rng rng(derive_seed(config.seed, "impressions"));
    const ZipfTable user_table(config.n_users, config.zipf_exponent);
    const ZipfTable ad_table(config.n_ads, config.zipf_exponent);
    const ZipfTable query_table(config.n_queries, config.zipf_exponent);
    for (std::size_t i = 0; i < n; ++i) {
      Draw& d = draws[i];
      d.user = user_table.sample(rng);
      d.ad = ad_table.sample(rng);
      d.query = query_table.sample(rng);
      d.position = 1 + static_cast<int>(rng.below(kPositions));
      const double raw_bid = std::exp(std::log(0.5) + 0.6 * rng.normal());
      d.bid = std::max(0.01, std::round(raw_bid * 100.0) / 100.0);

      const UserEntity& u = users[d.user];
      const AdEntity& a = ads[d.ad];
      const QueryEntity& q = queries[d.query];
      const double s_user = 2.0 * u.group - 1.0;
      const double s_ad = 2.0 * a.group - 1.0;
      const double s_query = 2.0 * q.group - 1.0;
      const double linear = u.weight + region_w[u.region] + a.weight + campaign_w[a.campaign] +
                            q.linear - 0.2 * (d.position - 1);
      const double interaction =
          config.interaction_strength * (s_user * s_ad + s_ad * s_query);
      logit_wo_bias[i] = linear + interaction;
    }
  }

  // Global bias such that the mean oracle CTR equals base_ctr.
  const auto mean_ctr = [&](double b) {
    double sum = 0.0;
    for (double z : logit_wo_bias) sum += sigmoid(b + z);
    return sum / static_cast<double>(n);
  };
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_ctr(mid) < config.base_ctr ? lo : hi) = mid;
  }
  const double bias = 0.5 * (lo + hi);

  // Dense aggregates: each entity's linear-only CTR with fixed per-entity noise.
  Rng dense_rng(derive_seed(config.seed, "dense"));
  const auto noisy_ctr = [&](double linear) {
    const double v = sigmoid(bias + linear) + config.dense_noise * dense_rng.normal();
    return round6(std::clamp(v, 0.0, 1.0));
  };
  std::vector<double> user_hist(users.size()), ad_hist(ads.size()), query_hist(queries.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    user_hist[i] = noisy_ctr(users[i].weight + region_w[users[i].region]);
  }
  for (std::size_t i = 0; i < ads.size(); ++i) {
    ad_hist[i] = noisy_ctr(ads[i].weight + campaign_w[ads[i].campaign]);
  }
  for (std::size_t i = 0; i < queries.size(); ++i) query_hist[i] = noisy_ctr(queries[i].linear);

  GeneratedLog log;
  log.records.reserve(n);
  log.oracle_ctrs.reserve(n);
  Rng label_rng(derive_seed(config.seed, "labels"));
  for (std::size_t i = 0; i < n; ++i) {
    const Draw& d = draws[i];
    const UserEntity& u = users[d.user];
    const AdEntity& a = ads[d.ad];
    const QueryEntity& q = queries[d.query];
    const double ctr = sigmoid(bias + logit_wo_bias[i]);

    ImpressionRecord r;
    for (const auto& name : schema.names) r.id_features[name];
    r.label = label_rng.bernoulli(ctr) ? 1 : 0;
    r.bid = d.bid;
    put(r, schema, "user_id", "u" + std::to_string(d.user));
    put(r, schema, "region_id", "r" + std::to_string(u.region));
    put(r, schema, "ad_id", "a" + std::to_string(d.ad));
    put(r, schema, "campaign_id", "c" + std::to_string(a.campaign));
    put(r, schema, "domain_id", "d" + std::to_string(a.campaign % n_domains));
    for (std::size_t w : a.title) put(r, schema, "ad_title_words", "tw" + std::to_string(w));
    for (std::size_t w : a.body) put(r, schema, "ad_body_words", "bw" + std::to_string(w));
    put(r, schema, "ad_position", "p" + std::to_string(d.position));
    for (std::size_t w : a.keywords) put(r, schema, "ad_keywords", "kw" + std::to_string(w));
    put(r, schema, "query_words", "qt" + std::to_string(q.topic));
    for (std::size_t w : q.words) put(r, schema, "query_words", "qw" + std::to_string(w));
    if (schema.real_dim == kGeneratedRealDim) {
      r.real_features = {user_hist[d.user], ad_hist[d.ad], query_hist[d.query],
                         static_cast<double>(d.position), d.bid};
    }
    log.records.push_back(std::move(r));
    log.oracle_ctrs.push_back(ctr);
  }
  return log;
}

void write_oracle(const std::filesystem::path& path, std::span<const double> ctrs) {
  LineWriter writer(path);
  for (double c : ctrs) writer.write_line(format_double(c));
  writer.commit();
}

std::vector<double> read_oracle(const std::filesystem::path& path) {
  LineReader reader(path);
  std::vector<double> out;
  std::string line;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto v = parse_double(trim(line));
    if (!v || *v < 0.0 || *v > 1.0) throw ParseError("bad oracle CTR", reader.line_number());
    out.push_back(*v);
  }
  return out;
}

void SplitRatios::validate() const {
  for (double r : {train, valid, test}) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("split ratios must each be in (0,1)");
  }
  if (std::abs(train + valid + test - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
}

SplitIndices split_indices(std::size_t n, const SplitRatios& ratios) {
  ratios.validate();
  if (n < 3) throw SplitError("need at least 3 records to split, got " + std::to_string(n));
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(ratios.seed);
  rng.shuffle(std::span<std::size_t>(perm));

  const auto count = [n](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t n_valid = count(ratios.valid);
  const std::size_t n_test = count(ratios.test);
  const std::size_t n_train = n - n_valid - n_test;

  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.valid.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                   perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), perm.end());
  return out;
}

}  // namespace ctrnet
