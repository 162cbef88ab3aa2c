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


// ctrnet: command-line front end for the click-prediction pipeline.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ctrnet/commands.h"
#include "ctrnet/error.h"
#include "ctrnet/experiment.h"

namespace fs = std::filesystem;

namespace {

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

std::vector<fs::path> to_paths(const std::vector<std::string>& items) {
  return {items.begin(), items.end()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Click-through-rate prediction pipeline"};
  app.set_version_flag("--version", std::string(ctrnet::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--set", overrides, "Config override key=value (repeatable)");

  std::string log, oracle, data, spec, grid, baseline, lr_model, candidates;
  std::vector<std::string> models;
  std::size_t k = 3;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic click log with oracle CTRs");
  auto* prep = app.add_subcommand("prep", "Split, count, prune and hash a click log");
  prep->add_option("--log", log, "Click log")->required()->check(CLI::ExistingFile);
  prep->add_option("--oracle", oracle, "Oracle CTR file aligned with the log")
      ->check(CLI::ExistingFile);
  auto* train = app.add_subcommand("train", "Train one model on a prep directory");
  train->add_option("--data", data, "Prep output directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--model", spec, "lr, lr-sgd or ann:<h1>[,<h2>]")->required();
  train->add_option("--grid", grid, "Grid file: one line of key=value overrides per trial")
      ->check(CLI::ExistingFile);
  auto* eval = app.add_subcommand("eval", "Evaluate models on the test split");
  eval->add_option("--data", data, "Prep output directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--models", models, "Model files")->required();
  eval->add_option("--baseline", baseline, "Baseline model for deltas");
  auto* curve = app.add_subcommand("ensemble-curve", "Prefix-ensemble metrics on the test split");
  curve->add_option("--data", data, "Prep output directory")->required()->check(CLI::ExistingDirectory);
  curve->add_option("--models", models, "Model files in ensemble order")->required();
  auto* ablate = app.add_subcommand("ablate", "Train on nested fractions of the train split");
  ablate->add_option("--data", data, "Prep output directory")->required()->check(CLI::ExistingDirectory);
  auto* stack = app.add_subcommand("stack", "Boosted trees over dense features plus model outputs");
  stack->add_option("--data", data, "Prep output directory")->required()->check(CLI::ExistingDirectory);
  stack->add_option("--lr", lr_model, "Logistic regression model")->required()->check(CLI::ExistingFile);
  stack->add_option("--models", models, "Network models")->required();
  auto* rank = app.add_subcommand("rank-ads", "Select and order ads by expected revenue");
  rank->add_option("--candidates", candidates, "CSV ad_id,bid,ctr")->required()->check(CLI::ExistingFile);
  rank->add_option("--k", k, "Number of ads to show")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    ctrnet::ExperimentConfig config;
    if (!config_path.empty()) config = ctrnet::ExperimentConfig::from_file(config_path);
    if (seed) config.seed = *seed;
    ctrnet::apply_overrides(config, overrides);
    config.validate();
    const fs::path out{out_dir};

    if (gen->parsed()) {
      ctrnet::cmd_gen(config, out);
    } else if (prep->parsed()) {
      ctrnet::cmd_prep(config, log, optional_path(oracle), out);
    } else if (train->parsed()) {
      ctrnet::cmd_train(config, data, spec, optional_path(grid), out);
    } else if (eval->parsed()) {
      ctrnet::cmd_eval(config, data, to_paths(models), optional_path(baseline), out);
    } else if (curve->parsed()) {
      ctrnet::cmd_ensemble_curve(config, data, to_paths(models), out);
    } else if (ablate->parsed()) {
      ctrnet::cmd_ablate(config, data, out);
    } else if (stack->parsed()) {
      ctrnet::cmd_stack(config, data, lr_model, to_paths(models), out);
    } else if (rank->parsed()) {
      ctrnet::cmd_rank_ads(config, candidates, k, out);
    }
  } catch (const ctrnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ctrnet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
