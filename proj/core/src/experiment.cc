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


#include "ctrnet/experiment.h"

#include <algorithm>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ctrnet/binary_io.h"
#include "ctrnet/error.h"
#include "ctrnet/text_io.h"

namespace ctrnet {

namespace {

using Json = nlohmann::json;

double to_double(std::string_view key, std::string_view v) {
  const auto d = parse_double(trim(v));
  if (!d) throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return *d;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  const auto u = parse_u64(trim(v));
  if (!u) {
    throw ConfigError(std::string(key) + ": expected an unsigned integer, got '" +
                      std::string(v) + "'");
  }
  return *u;
}

bool to_bool(std::string_view key, std::string_view v) {
  const std::string_view t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string> to_list(std::string_view v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  for (auto part : split_on(v, ';')) out.emplace_back(trim(part));
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ";" : "") + items[i];
  return out;
}

std::string join_doubles(const std::vector<double>& items) {
  std::vector<std::string> s;
  for (double d : items) s.push_back(format_double(d));
  return join(s);
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define CTRNET_U64(name, member)                                                      \
  {name,                                                                              \
   {[](ExperimentConfig& c, std::string_view k, std::string_view v) {                 \
      c.member = static_cast<decltype(c.member)>(to_u64(k, v));                       \
    },                                                                                \
    [](const ExperimentConfig& c) { return std::to_string(c.member); }}}
#define CTRNET_F64(name, member)                                                                  \
  {name,                                                                                          \
   {[](ExperimentConfig& c, std::string_view k, std::string_view v) { c.member = to_double(k, v); }, \
    [](const ExperimentConfig& c) { return format_double(c.member); }}}

const std::map<std::string, Field>& registry() {
  static const std::map<std::string, Field> fields = {
      CTRNET_U64("seed", seed),
      {"gen.seed",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.gen.seed = to_u64(k, v);
          c.gen_seed_set = true;
        },
        [](const ExperimentConfig& c) { return std::to_string(c.generator().seed); }}},
      CTRNET_U64("gen.impressions", gen.n_impressions),
      CTRNET_U64("gen.users", gen.n_users),
      CTRNET_U64("gen.ads", gen.n_ads),
      CTRNET_U64("gen.queries", gen.n_queries),
      CTRNET_F64("gen.zipf", gen.zipf_exponent),
      CTRNET_F64("gen.base_ctr", gen.base_ctr),
      CTRNET_F64("gen.interaction", gen.interaction_strength),
      CTRNET_F64("gen.weight_scale", gen.weight_scale),
      CTRNET_F64("gen.dense_noise", gen.dense_noise),
      {"gen.dense",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.gen_dense = to_bool(k, v);
        },
        [](const ExperimentConfig& c) { return std::string(c.gen_dense ? "true" : "false"); }}},
      CTRNET_F64("split.train", split.train),
      CTRNET_F64("split.valid", split.valid),
      CTRNET_F64("split.test", split.test),
      CTRNET_U64("prune.threshold", prune.threshold),
      CTRNET_U64("hash.dimension", hash.dimension),
      CTRNET_U64("hash.seed", hash.seed),
      {"prep.quadratic",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.quadratic.clear();
          for (const auto& item : to_list(v)) {
            const auto parts = split_on(item, '*');
            if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
              throw ConfigError(std::string(k) + ": expected A*B pairs, got '" + item + "'");
            }
            c.quadratic.emplace_back(parts[0], parts[1]);
          }
        },
        [](const ExperimentConfig& c) {
          std::vector<std::string> s;
          for (const auto& [a, b] : c.quadratic) s.push_back(a + "*" + b);
          return join(s);
        }}},
      {"prep.lr_raw",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.prep_lr_raw = to_bool(k, v);
        },
        [](const ExperimentConfig& c) { return std::string(c.prep_lr_raw ? "true" : "false"); }}},
      CTRNET_U64("lr.dimension", lr_dimension),
      {"lr.raw_inputs",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.lr_raw_inputs = to_bool(k, v);
        },
        [](const ExperimentConfig& c) { return std::string(c.lr_raw_inputs ? "true" : "false"); }}},
      CTRNET_F64("lr.l2", lr.l2),
      {"lr.l2_grid",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.lr_l2_grid.clear();
          for (const auto& item : to_list(v)) c.lr_l2_grid.push_back(to_double(k, item));
        },
        [](const ExperimentConfig& c) { return join_doubles(c.lr_l2_grid); }}},
      CTRNET_U64("lr.memory", lr.memory),
      CTRNET_F64("lr.tolerance", lr.tolerance),
      CTRNET_U64("lr.max_iterations", lr.max_iterations),
      CTRNET_F64("lr.sgd_rate", lr_sgd.learning_rate),
      CTRNET_F64("lr.sgd_l2", lr_sgd.l2),
      CTRNET_U64("lr.sgd_batch", lr_sgd.batch_size),
      CTRNET_U64("lr.sgd_epochs", lr_sgd.epochs),
      CTRNET_F64("mlp.rate", mlp.learning_rate),
      CTRNET_F64("mlp.l2", mlp.l2),
      CTRNET_F64("mlp.decay", mlp.decay),
      {"mlp.schedule",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          const auto t = trim(v);
          if (t == "inverse") {
            c.mlp.schedule = DecaySchedule::kInverse;
          } else if (t == "linear") {
            c.mlp.schedule = DecaySchedule::kLinear;
          } else {
            throw ConfigError(std::string(k) + ": expected inverse or linear");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.mlp.schedule == DecaySchedule::kLinear ? "linear" : "inverse");
        }}},
      {"mlp.activation",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          const auto t = trim(v);
          if (t == "relu") {
            c.activation = Activation::kRelu;
          } else if (t == "linear") {
            c.activation = Activation::kLinear;
          } else {
            throw ConfigError(std::string(k) + ": expected relu or linear");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.activation == Activation::kLinear ? "linear" : "relu");
        }}},
      CTRNET_U64("mlp.batch", mlp.batch_size),
      CTRNET_F64("mlp.dropout", mlp.dropout),
      CTRNET_U64("mlp.max_epochs", mlp.max_epochs),
      CTRNET_U64("mlp.patience", mlp.patience),
      CTRNET_U64("boost.trees", boost.n_trees),
      CTRNET_U64("boost.depth", boost.depth),
      CTRNET_F64("boost.shrinkage", boost.shrinkage),
      CTRNET_U64("boost.bins", boost.bins),
      CTRNET_F64("boost.leaf_l2", boost.leaf_l2),
      {"ablate.fractions",
       {[](ExperimentConfig& c, std::string_view k, std::string_view v) {
          c.ablate_fractions.clear();
          for (const auto& item : to_list(v)) c.ablate_fractions.push_back(to_double(k, item));
        },
        [](const ExperimentConfig& c) { return join_doubles(c.ablate_fractions); }}},
      {"ablate.models",
       {[](ExperimentConfig& c, std::string_view, std::string_view v) {
          c.ablate_models = to_list(v);
        },
        [](const ExperimentConfig& c) { return join(c.ablate_models); }}},
      {"stack.train_split",
       {[](ExperimentConfig& c, std::string_view, std::string_view v) {
          c.stack_train_split = std::string(trim(v));
        },
        [](const ExperimentConfig& c) { return c.stack_train_split; }}},
  };
  return fields;
}

#undef CTRNET_U64
#undef CTRNET_F64

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  const auto& fields = registry();
  const auto it = fields.find(std::string(trim(key)));
  if (it == fields.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second.set(*this, it->first, value);
}

void ExperimentConfig::validate() const {
  generator().validate();
  split_ratios().validate();
  prune.validate();
  hash.validate();
  HashConfig{lr_dimension, hash.seed}.validate();
  lr.validate();
  for (double l2 : lr_l2_grid) {
    if (!(l2 >= 0.0)) throw ConfigError("lr.l2_grid values must be >= 0");
  }
  lr_sgd.validate();
  mlp.validate();
  boost.validate();
  for (double f : ablate_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("ablate.fractions must lie in (0,1]");
  }
  for (const auto& m : ablate_models) ModelSpec::parse(m);
  if (stack_train_split != "valid" && stack_train_split != "train") {
    throw ConfigError("stack.train_split must be valid or train");
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, field] : registry()) out.emplace_back(key, field.get(*this));
  return out;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : registry()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    try {
      config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  return parse(read_file(path));
}

GeneratorConfig ExperimentConfig::generator() const {
  GeneratorConfig g = gen;
  if (!gen_seed_set) g.seed = seed;
  return g;
}

SplitRatios ExperimentConfig::split_ratios() const {
  SplitRatios r = split;
  r.seed = stage_seed("split");
  return r;
}

void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    config.set(std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
  }
}

ModelSpec ModelSpec::parse(std::string_view text) {
  const std::string_view t = trim(text);
  ModelSpec spec;
  if (t == "lr") return spec;
  if (t == "lr-sgd") {
    spec.kind = Kind::kLrSgd;
    return spec;
  }
  if (t.substr(0, 4) == "ann:" && t.size() > 4) {
    spec.kind = Kind::kAnn;
    bool ok = true;
    for (auto part : split_on(t.substr(4), ',')) {
      const auto h = parse_u64(part);
      if (!h || *h == 0) {
        ok = false;
        break;
      }
      spec.hidden.push_back(static_cast<std::size_t>(*h));
    }
    if (ok) return spec;
  }
  std::string presets;
  for (const auto& p : MlpArchitecture::presets()) {
    presets += " ann:";
    for (std::size_t i = 0; i < p.size(); ++i) presets += (i ? "," : "") + std::to_string(p[i]);
  }
  throw ConfigError("unknown model spec '" + std::string(text) + "'; expected lr, lr-sgd or one of" +
                    presets);
}

std::string ModelSpec::to_string() const {
  if (kind == Kind::kLr) return "lr";
  if (kind == Kind::kLrSgd) return "lr-sgd";
  std::string out = "ann:";
  for (std::size_t i = 0; i < hidden.size(); ++i) out += (i ? "," : "") + std::to_string(hidden[i]);
  return out;
}

void write_model_sidecar(const std::filesystem::path& model_path, const ModelSpec& spec,
                         const HashConfig& hash, const std::map<std::string, std::string>& extra) {
  Json j;
  j["spec"] = spec.to_string();
  j["hash"] = {{"dimension", hash.dimension}, {"seed", hash.seed}};
  j["settings"] = extra;
  j["tool_version"] = std::string(kToolVersion);
  write_text_atomic(model_path.string() + ".json", j.dump(2) + "\n");
}

std::shared_ptr<const CtrModel> load_model(const std::filesystem::path& path) {
  const std::filesystem::path sidecar = path.string() + ".json";
  if (!std::filesystem::exists(sidecar)) throw IoError("missing model sidecar " + sidecar.string());
  HashConfig hash;
  try {
    const Json j = Json::parse(read_file(sidecar));
    hash.dimension = j.at("hash").at("dimension").get<std::uint64_t>();
    hash.seed = j.at("hash").at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad model sidecar " + sidecar.string() + ": " + e.what());
  }
  const std::string magic = peek_magic(path, 8);
  if (magic == "CTRLINR1") return std::make_shared<LinearModel>(LinearModel::load(path, hash));
  if (magic == "CTRMLP01") return std::make_shared<MlpModel>(MlpModel::load(path, hash));
  throw IoError(path.string() + " is not a click model file");
}

void RunManifest::add_input(const std::filesystem::path& path, std::string role) {
  inputs.push_back({path.generic_string(), std::move(role), sha256_file(path)});
}

void RunManifest::add_output(const std::filesystem::path& out_dir, const std::string& path,
                             std::string role) {
  outputs.push_back({path, std::move(role), sha256_file(out_dir / path)});
}

void RunManifest::write(const std::filesystem::path& out_dir) const {
  Json j;
  j["command"] = command;
  j["tool_version"] = std::string(kToolVersion);
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  const auto files = [](const std::vector<ManifestFile>& list) {
    Json arr = Json::array();
    for (const auto& f : list) arr.push_back({{"path", f.path}, {"role", f.role}, {"sha256", f.sha256}});
    return arr;
  };
  j["inputs"] = files(inputs);
  j["outputs"] = files(outputs);
  Json m = Json::object();
  for (const auto& [k, v] : metrics) m[k] = v;
  j["metrics"] = m;
  write_text_atomic(out_dir / "manifest.json", j.dump(2) + "\n");
}

RunManifest RunManifest::read(const std::filesystem::path& manifest_path) {
  RunManifest r;
  try {
    const Json j = Json::parse(read_file(manifest_path));
    r.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
    const auto files = [](const Json& arr) {
      std::vector<ManifestFile> out;
      for (const auto& f : arr) {
        out.push_back({f.at("path").get<std::string>(), f.at("role").get<std::string>(),
                       f.at("sha256").get<std::string>()});
      }
      return out;
    };
    r.inputs = files(j.at("inputs"));
    r.outputs = files(j.at("outputs"));
    for (const auto& [k, v] : j.at("metrics").items()) r.metrics[k] = v.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest " + manifest_path.string() + ": " + e.what());
  }
  return r;
}

}  // namespace ctrnet
