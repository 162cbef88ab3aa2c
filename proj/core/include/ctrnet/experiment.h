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
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctrnet/clicklog.h"
#include "ctrnet/ctr_model.h"
#include "ctrnet/featurepipe.h"
#include "ctrnet/linearmodel.h"
#include "ctrnet/sparsenet.h"
#include "ctrnet/treeboost.h"

namespace ctrnet {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Every tunable setting of a pipeline run. Serialized as flat `key = value`
// lines; see ExperimentConfig::keys() for the full list.
struct ExperimentConfig {
  std::uint64_t seed = 42;
  GeneratorConfig gen;
  bool gen_seed_set = false;
  bool gen_dense = true;
  SplitRatios split;
  PruneConfig prune;
  HashConfig hash;
  std::vector<std::pair<std::string, std::string>> quadratic;
  // Also write unpruned (threshold 1) LR inputs hashed into lr_dimension.
  bool prep_lr_raw = false;
  std::uint64_t lr_dimension = 262144;
  // Train lr/lr-sgd specs on those unpruned inputs.
  bool lr_raw_inputs = false;
  LbfgsConfig lr;
  std::vector<double> lr_l2_grid;
  SgdLrConfig lr_sgd;
  MlpTrainConfig mlp;
  Activation activation = Activation::kRelu;
  BoostConfig boost;
  std::vector<double> ablate_fractions = {0.0625, 0.25, 1.0};
  std::vector<std::string> ablate_models = {"lr", "ann:50"};
  std::string stack_train_split = "valid";

  // Throws ConfigError for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  // Sorted (key, value) pairs in the canonical text form.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_text() const;

  static const std::vector<std::string>& keys();
  // `key = value` lines; blank lines and `#` comments are skipped.
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig from_file(const std::filesystem::path& path);

  // Per-stage seeds fanned out from `seed`.
  std::uint64_t stage_seed(std::string_view stage) const { return derive_seed(seed, stage); }
  GeneratorConfig generator() const;
  SplitRatios split_ratios() const;
};

// Applies `key=value` overrides in order.
void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides);

struct ModelSpec {
  enum class Kind { kLr, kLrSgd, kAnn };
  Kind kind = Kind::kLr;
  std::vector<std::size_t> hidden;

  // `lr`, `lr-sgd`, or `ann:<h1>[,<h2>...]`.
  static ModelSpec parse(std::string_view text);
  std::string to_string() const;
};

// Model files carry a JSON sidecar at `<path>.json` with the spec, hash
// configuration and training settings.
std::shared_ptr<const CtrModel> load_model(const std::filesystem::path& path);
void write_model_sidecar(const std::filesystem::path& model_path, const ModelSpec& spec,
                         const HashConfig& hash, const std::map<std::string, std::string>& extra);

struct ManifestFile {
  std::string path;
  std::string role;
  std::string sha256;
};

// Record of one command invocation, written last and atomically.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ManifestFile> inputs;
  std::vector<ManifestFile> outputs;
  std::map<std::string, double> metrics;

  void add_input(const std::filesystem::path& path, std::string role);
  // `path` is relative to the output directory.
  void add_output(const std::filesystem::path& out_dir, const std::string& path, std::string role);
  void write(const std::filesystem::path& out_dir) const;
  static RunManifest read(const std::filesystem::path& manifest_path);
};

}  // namespace ctrnet
