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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctrnet/ctr_model.h"
#include "ctrnet/dataset.h"
#include "ctrnet/experiment.h"
#include "ctrnet/metrics.h"

namespace ctrnet {

// File names inside a prep output directory.
inline constexpr std::string_view kTrainFile = "train.ds";
inline constexpr std::string_view kValidFile = "valid.ds";
inline constexpr std::string_view kTestFile = "test.ds";

struct TrainedModel {
  ModelSpec spec;
  std::shared_ptr<const CtrModel> model;
  MetricsReport valid;
  // Per-iteration (lr) or per-epoch validation (ann) trace.
  std::vector<double> trace;
  std::map<std::string, std::string> settings;
};

// Trains one spec; for `lr` with a nonempty lr.l2_grid the l2 value with the
// lowest validation NLL wins. Network seeds derive from the spec string.
TrainedModel train_model(const ModelSpec& spec, const ExperimentConfig& config,
                         const VectorizedDataset& train, const VectorizedDataset& valid);

void save_model(const TrainedModel& trained, const std::filesystem::path& path);

// Rows of `train` kept for one ablation fraction: the first ceil(f * n)
// positions of a seeded permutation, restored to their original order so that
// f = 1 reproduces the full split exactly.
std::vector<std::size_t> ablation_subset(std::size_t n, double fraction, std::uint64_t seed);

// Subcommands. Each writes its artifacts and manifest.json under `out`.
RunManifest cmd_gen(const ExperimentConfig& config, const std::filesystem::path& out);
RunManifest cmd_prep(const ExperimentConfig& config, const std::filesystem::path& log,
                     const std::optional<std::filesystem::path>& oracle,
                     const std::filesystem::path& out);
RunManifest cmd_train(const ExperimentConfig& config, const std::filesystem::path& prep_dir,
                      const std::string& spec, const std::optional<std::filesystem::path>& grid,
                      const std::filesystem::path& out);
RunManifest cmd_eval(const ExperimentConfig& config, const std::filesystem::path& prep_dir,
                     const std::vector<std::filesystem::path>& models,
                     const std::optional<std::filesystem::path>& baseline,
                     const std::filesystem::path& out);
RunManifest cmd_ensemble_curve(const ExperimentConfig& config, const std::filesystem::path& prep_dir,
                               const std::vector<std::filesystem::path>& models,
                               const std::filesystem::path& out);
RunManifest cmd_ablate(const ExperimentConfig& config, const std::filesystem::path& prep_dir,
                       const std::filesystem::path& out);
RunManifest cmd_stack(const ExperimentConfig& config, const std::filesystem::path& prep_dir,
                      const std::filesystem::path& lr_model,
                      const std::vector<std::filesystem::path>& ann_models,
                      const std::filesystem::path& out);
RunManifest cmd_rank_ads(const ExperimentConfig& config, const std::filesystem::path& candidates,
                         std::size_t k, const std::filesystem::path& out);

}  // namespace ctrnet
