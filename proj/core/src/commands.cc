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


#include "ctrnet/commands.h"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "ctrnet/auction.h"
#include "ctrnet/ensemble.h"
#include "ctrnet/error.h"
#include "ctrnet/linearmodel.h"
#include "ctrnet/sparsenet.h"
#include "ctrnet/text_io.h"
#include "ctrnet/treeboost.h"

namespace ctrnet {

namespace fs = std::filesystem;

namespace {

RunManifest start(const std::string& command, const ExperimentConfig& config, const fs::path& out) {
  config.validate();
  fs::create_directories(out);
  RunManifest m;
  m.command = command;
  m.config = config.entries();
  return m;
}

void write_values(const fs::path& path, std::span<const double> values) {
  LineWriter w(path);
  for (double v : values) w.write_line(format_double(v));
  w.commit();
}

void write_trace(const fs::path& path, std::string_view column, std::span<const double> values) {
  LineWriter w(path);
  w.write_line("step," + std::string(column));
  for (std::size_t i = 0; i < values.size(); ++i) {
    w.write_line(std::to_string(i) + "," + format_double(values[i]));
  }
  w.commit();
}

std::string count_prefixed(const FeatureCounts& counts, std::string_view ns) {
  const std::string prefix = std::string(ns) + "^";
  std::size_t n = 0;
  for (const auto& entry : counts) n += entry.first.compare(0, prefix.size(), prefix) == 0;
  return std::to_string(n);
}

VectorizedDataset load_split(const fs::path& prep_dir, std::string_view name, RunManifest& m,
                             const std::string& role) {
  const fs::path path = prep_dir / name;
  m.add_input(path, role);
  return VectorizedDataset::load(path);
}

bool is_linear(const ModelSpec& spec) { return spec.kind != ModelSpec::Kind::kAnn; }

std::string split_file(std::string_view split, bool raw) {
  return (raw ? "lr_" : "") + std::string(split) + ".ds";
}

// Loads each split file at most once and hands out the variant (pruned or
// unpruned LR inputs) whose hash configuration matches a model.
class SplitCache {
 public:
  SplitCache(fs::path prep_dir, RunManifest& manifest)
      : dir_(std::move(prep_dir)), manifest_(manifest) {}

  const VectorizedDataset& get(std::string_view split, bool raw) {
    const std::string file = split_file(split, raw);
    auto it = cache_.find(file);
    if (it == cache_.end()) {
      if (raw && !fs::exists(dir_ / file)) {
        throw ConfigError(file + " not found; rerun prep with prep.lr_raw = true");
      }
      it = cache_.emplace(file, load_split(dir_, file, manifest_, std::string(split))).first;
    }
    return it->second;
  }

  const VectorizedDataset& matching(std::string_view split, const CtrModel& model) {
    const VectorizedDataset& pruned = get(split, false);
    if (pruned.hash == model.hash_config()) return pruned;
    if (fs::exists(dir_ / split_file(split, true))) {
      const VectorizedDataset& raw = get(split, true);
      if (raw.hash == model.hash_config()) return raw;
    }
    throw ConfigError("no " + std::string(split) + " split in " + dir_.string() +
                      " matches the model's hash configuration");
  }

 private:
  fs::path dir_;
  RunManifest& manifest_;
  std::map<std::string, VectorizedDataset> cache_;
};

std::vector<double> clamp_open(std::vector<double> p) {
  for (double& v : p) v = std::clamp(v, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return p;
}

}  // namespace

TrainedModel train_model(const ModelSpec& spec, const ExperimentConfig& config,
                         const VectorizedDataset& train, const VectorizedDataset& valid) {
  if (train.empty() || valid.empty()) throw TrainingError("train and valid splits must be nonempty");
  TrainedModel out;
  out.spec = spec;
  const std::uint64_t seed = config.stage_seed("train:" + spec.to_string());
  switch (spec.kind) {
    case ModelSpec::Kind::kLr: {
      std::vector<double> grid = config.lr_l2_grid;
      if (grid.empty()) grid.push_back(config.lr.l2);
      bool have = false;
      for (double l2 : grid) {
        LbfgsConfig c = config.lr;
        c.l2 = l2;
        LinearTrainResult r = train_lbfgs(train, c);
        MetricsReport rep = evaluate(r.model.predict_all(valid), valid.labels);
        if (!have || rep.nll < out.valid.nll) {
          have = true;
          out.model = std::make_shared<LinearModel>(std::move(r.model));
          out.valid = std::move(rep);
          out.trace = r.report.trace;
          out.settings = {{"l2", format_double(l2)},
                          {"iterations", std::to_string(r.report.iterations)},
                          {"converged", r.report.converged ? "true" : "false"},
                          {"tolerance", format_double(c.tolerance)}};
        }
      }
      break;
    }
    case ModelSpec::Kind::kLrSgd: {
      SgdLrConfig c = config.lr_sgd;
      c.seed = seed;
      auto model = std::make_shared<LinearModel>(train_sgd_lr(train, c));
      out.valid = evaluate(model->predict_all(valid), valid.labels);
      out.model = std::move(model);
      out.settings = {{"learning_rate", format_double(c.learning_rate)},
                      {"l2", format_double(c.l2)},
                      {"epochs", std::to_string(c.epochs)}};
      break;
    }
    case ModelSpec::Kind::kAnn: {
      MlpArchitecture arch;
      arch.input_dim = train.hash.dimension;
      arch.hidden_sizes = spec.hidden;
      arch.activation = config.activation;
      MlpTrainConfig c = config.mlp;
      c.seed = seed;
      MlpTrainResult r = train_mlp(train, valid, arch, c);
      auto model = std::make_shared<MlpModel>(std::move(r.model));
      out.valid = evaluate(model->predict_all(valid), valid.labels);
      out.model = std::move(model);
      out.trace = r.valid_nll;
      out.settings = {{"learning_rate", format_double(c.learning_rate)},
                      {"l2", format_double(c.l2)},
                      {"decay", format_double(c.decay)},
                      {"dropout", format_double(c.dropout)},
                      {"batch_size", std::to_string(c.batch_size)},
                      {"epochs_run", std::to_string(r.epochs_run)},
                      {"best_epoch", std::to_string(r.best_epoch)}};
      break;
    }
  }
  return out;
}

void save_model(const TrainedModel& trained, const fs::path& path) {
  if (const auto* lr = dynamic_cast<const LinearModel*>(trained.model.get())) {
    lr->save(path);
  } else if (const auto* ann = dynamic_cast<const MlpModel*>(trained.model.get())) {
    ann->save(path);
  } else {
    throw Error("cannot save model of kind " + std::string(trained.model->kind()));
  }
  write_model_sidecar(path, trained.spec, trained.model->hash_config(), trained.settings);
}

std::vector<std::size_t> ablation_subset(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("fraction must be in (0,1]");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  const auto m = std::min<std::size_t>(
      n, std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9))));
  perm.resize(m);
  std::sort(perm.begin(), perm.end());
  return perm;
}

RunManifest cmd_gen(const ExperimentConfig& config, const fs::path& out) {
  RunManifest m = start("gen", config, out);
  NamespaceSchema schema = NamespaceSchema::defaults();
  if (!config.gen_dense) schema.real_dim = 0;
  const GeneratedLog log = generate(config.generator(), schema);
  write_click_log(out / "clicks.log", log.records, schema);
  write_oracle(out / "oracle.txt", log.oracle_ctrs);

  std::size_t positives = 0;
  for (const auto& r : log.records) positives += static_cast<std::size_t>(r.label);
  const double n = static_cast<double>(log.records.size());
  const double mean_oracle =
      std::accumulate(log.oracle_ctrs.begin(), log.oracle_ctrs.end(), 0.0) / n;
  LineWriter w(out / "gen_report.csv");
  w.write_line("metric,value");
  w.write_line("impressions," + std::to_string(log.records.size()));
  w.write_line("positives," + std::to_string(positives));
  w.write_line("positive_rate," + format_double(static_cast<double>(positives) / n));
  w.write_line("mean_oracle_ctr," + format_double(mean_oracle));
  w.commit();

  m.add_output(out, "clicks.log", "log");
  m.add_output(out, "oracle.txt", "oracle");
  m.add_output(out, "gen_report.csv", "report");
  m.metrics["positive_rate"] = static_cast<double>(positives) / n;
  m.metrics["mean_oracle_ctr"] = mean_oracle;
  m.write(out);
  return m;
}

RunManifest cmd_prep(const ExperimentConfig& config, const fs::path& log,
                     const std::optional<fs::path>& oracle, const fs::path& out) {
  RunManifest m = start("prep", config, out);
  m.add_input(log, "log");
  NamespaceSchema schema = NamespaceSchema::defaults();
  std::vector<ImpressionRecord> records = read_click_log(log, schema);
  if (records.empty()) throw Error("click log " + log.string() + " is empty");
  std::vector<double> oracle_ctrs;
  if (oracle) {
    m.add_input(*oracle, "oracle");
    oracle_ctrs = read_oracle(*oracle);
    if (oracle_ctrs.size() != records.size()) {
      throw DimensionError("oracle has " + std::to_string(oracle_ctrs.size()) + " values for " +
                           std::to_string(records.size()) + " records");
    }
  }
  if (!config.quadratic.empty()) {
    for (auto& r : records) r = cross_quadratic(r, schema, config.quadratic);
    schema = with_crosses(schema, config.quadratic);
  }

  const SplitIndices idx = split_indices(records.size(), config.split_ratios());
  const auto pick = [&](const std::vector<std::size_t>& rows) {
    std::vector<ImpressionRecord> out_records;
    out_records.reserve(rows.size());
    for (std::size_t i : rows) out_records.push_back(records[i]);
    return out_records;
  };
  const std::vector<ImpressionRecord> train = pick(idx.train);
  const VocabStats stats = count_features(train);
  const KeptSet kept = prune(stats, config.prune);

  const std::pair<std::string_view, const std::vector<std::size_t>*> splits[] = {
      {"train", &idx.train}, {"valid", &idx.valid}, {"test", &idx.test}};
  for (const auto& [name, rows] : splits) {
    const std::string file = std::string(name) + ".ds";
    const auto part = name == "train" ? train : pick(*rows);
    vectorize_all(part, kept, config.hash).save(out / file);
    m.add_output(out, file, std::string(name));
    if (oracle) {
      std::vector<double> part_oracle;
      for (std::size_t i : *rows) part_oracle.push_back(oracle_ctrs[i]);
      const std::string ofile = "oracle_" + std::string(name) + ".txt";
      write_values(out / ofile, part_oracle);
      m.add_output(out, ofile, "oracle_" + std::string(name));
    }
  }

  if (config.prep_lr_raw) {
    const KeptSet all = prune(stats, PruneConfig{1});
    const HashConfig raw_hash{config.lr_dimension, config.hash.seed};
    for (const auto& [name, rows] : splits) {
      const std::string file = split_file(name, true);
      vectorize_all(name == "train" ? train : pick(*rows), all, raw_hash).save(out / file);
      m.add_output(out, file, std::string(name));
    }
  }

  write_counts_tsv(out / "vocab.tsv", stats.counts);
  write_counts_tsv(out / "kept.tsv", kept.counts());
  LineWriter w(out / "report.csv");
  w.write_line("stage,impressions,ads,users,feature_space");
  const std::string n_train = std::to_string(train.size());
  w.write_line("raw," + n_train + "," + count_prefixed(stats.counts, "ad_id") + "," +
               count_prefixed(stats.counts, "user_id") + "," +
               std::to_string(stats.total_unique()));
  w.write_line("pruned," + n_train + "," + count_prefixed(kept.counts(), "ad_id") + "," +
               count_prefixed(kept.counts(), "user_id") + "," + std::to_string(kept.size()));
  w.commit();
  m.add_output(out, "vocab.tsv", "vocab");
  m.add_output(out, "kept.tsv", "vocab");
  m.add_output(out, "report.csv", "report");
  m.metrics["features_raw"] = static_cast<double>(stats.total_unique());
  m.metrics["features_kept"] = static_cast<double>(kept.size());
  m.write(out);
  return m;
}

RunManifest cmd_train(const ExperimentConfig& config, const fs::path& prep_dir,
                      const std::string& spec_text, const std::optional<fs::path>& grid,
                      const fs::path& out) {
  const ModelSpec spec = ModelSpec::parse(spec_text);
  RunManifest m = start("train", config, out);
  SplitCache splits(prep_dir, m);
  const bool raw = is_linear(spec) && config.lr_raw_inputs;
  const VectorizedDataset& train = splits.get("train", raw);
  const VectorizedDataset& valid = splits.get("valid", raw);

  std::optional<TrainedModel> best;
  if (grid) {
    m.add_input(*grid, "grid");
    LineWriter g(out / "grid.csv");
    g.write_line("trial,settings,valid_nll,valid_auprc");
    std::size_t trial = 0;
    for (const auto& raw : read_lines(*grid)) {
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      ExperimentConfig trial_config = config;
      std::vector<std::string> overrides;
      std::istringstream in{std::string(line)};
      for (std::string tok; in >> tok;) overrides.push_back(tok);
      apply_overrides(trial_config, overrides);
      trial_config.validate();
      TrainedModel t = train_model(spec, trial_config, train, valid);
      std::string joined;
      for (const auto& o : overrides) joined += (joined.empty() ? "" : " ") + o;
      g.write_line(std::to_string(trial++) + "," + joined + "," + format_double(t.valid.nll) + "," +
                   format_double(t.valid.auprc));
      if (!best || t.valid.nll < best->valid.nll) best = std::move(t);
    }
    if (!best) throw ConfigError("grid file " + grid->string() + " has no trials");
    g.commit();
  } else {
    best = train_model(spec, config, train, valid);
  }

  save_model(*best, out / "model.bin");
  write_report_csv(out / "valid_report.csv", best->valid);
  write_trace(out / "trace.csv", spec.kind == ModelSpec::Kind::kAnn ? "valid_nll" : "objective",
              best->trace);
  m.add_output(out, "model.bin", "model");
  m.add_output(out, "model.bin.json", "model");
  m.add_output(out, "valid_report.csv", "report");
  m.add_output(out, "trace.csv", "report");
  if (grid) m.add_output(out, "grid.csv", "report");
  m.metrics["valid_nll"] = best->valid.nll;
  m.metrics["valid_auprc"] = best->valid.auprc;
  m.write(out);
  return m;
}

RunManifest cmd_eval(const ExperimentConfig& config, const fs::path& prep_dir,
                     const std::vector<fs::path>& models, const std::optional<fs::path>& baseline,
                     const fs::path& out) {
  if (models.empty()) throw ConfigError("eval needs at least one model");
  RunManifest m = start("eval", config, out);
  SplitCache splits(prep_dir, m);

  MetricsReport base;
  if (baseline) {
    if (!fs::exists(*baseline)) throw IoError("baseline model " + baseline->string() + " not found");
    m.add_input(*baseline, "baseline");
    const auto model = load_model(*baseline);
    const VectorizedDataset& test = splits.matching("test", *model);
    base = evaluate(model->predict_all(test), test.labels);
  }
  LineWriter w(out / "eval.csv");
  w.write_line("model,nll,auprc,delta_nll,delta_auprc");
  for (std::size_t i = 0; i < models.size(); ++i) {
    m.add_input(models[i], "model");
    const auto model = load_model(models[i]);
    const VectorizedDataset& test = splits.matching("test", *model);
    const auto preds = model->predict_all(test);
    const MetricsReport r = evaluate(preds, test.labels);
    if (!baseline && i == 0) base = r;
    const MetricDeltas d = deltas(base, r);
    w.write_line(models[i].generic_string() + "," + format_double(r.nll) + "," +
                 format_double(r.auprc) + "," + format_double(d.nll_pct) + "," +
                 format_double(d.auprc_pct));
    const std::string pfile = "predictions_" + std::to_string(i) + ".txt";
    const std::string prfile = "pr_" + std::to_string(i) + ".csv";
    write_values(out / pfile, preds);
    write_pr_csv(out / prfile, r.pr_points);
    m.add_output(out, pfile, "predictions");
    m.add_output(out, prfile, "report");
    m.metrics["nll_" + std::to_string(i)] = r.nll;
    m.metrics["auprc_" + std::to_string(i)] = r.auprc;
  }
  w.commit();
  m.add_output(out, "eval.csv", "report");
  m.write(out);
  return m;
}

RunManifest cmd_ensemble_curve(const ExperimentConfig& config, const fs::path& prep_dir,
                               const std::vector<fs::path>& models, const fs::path& out) {
  if (models.empty()) throw ConfigError("ensemble-curve needs at least one model");
  RunManifest m = start("ensemble-curve", config, out);
  SplitCache splits(prep_dir, m);
  std::vector<std::shared_ptr<const CtrModel>> members;
  for (const auto& p : models) {
    m.add_input(p, "model");
    members.push_back(load_model(p));
  }
  const VectorizedDataset& test = splits.matching("test", *members.front());
  const std::vector<CurvePoint> curve = ensemble_curve(members, test);
  write_curve_csv(out / "curve.csv", curve);
  const EnsembleModel ensemble(members);
  write_values(out / "ensemble_predictions.txt", ensemble.predict_all(test));
  m.add_output(out, "curve.csv", "report");
  m.add_output(out, "ensemble_predictions.txt", "predictions");
  m.metrics["final_nll"] = curve.back().nll;
  m.metrics["final_auprc"] = curve.back().auprc;
  m.write(out);
  return m;
}

RunManifest cmd_ablate(const ExperimentConfig& config, const fs::path& prep_dir,
                       const fs::path& out) {
  RunManifest m = start("ablate", config, out);
  SplitCache splits(prep_dir, m);

  struct Row {
    double fraction;
    std::string model;
    std::size_t rows;
    MetricsReport report;
  };
  std::vector<Row> rows;
  for (double f : config.ablate_fractions) {
    for (const auto& spec_text : config.ablate_models) {
      const ModelSpec spec = ModelSpec::parse(spec_text);
      const bool raw = is_linear(spec) && config.lr_raw_inputs;
      const VectorizedDataset& train = splits.get("train", raw);
      const VectorizedDataset& valid = splits.get("valid", raw);
      const VectorizedDataset& test = splits.get("test", raw);
      // Row positions agree across the pruned and unpruned files, so both
      // variants see the same impressions.
      const auto idx = ablation_subset(train.size(), f, config.stage_seed("ablate"));
      const VectorizedDataset subset = train.subset(idx);
      const TrainedModel t = train_model(spec, config, subset, valid);
      rows.push_back({f, spec.to_string(), subset.size(),
                      evaluate(t.model->predict_all(test), test.labels)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.fraction != b.fraction) return a.fraction < b.fraction;
    return a.model < b.model;
  });
  LineWriter w(out / "ablation.csv");
  w.write_line("fraction,model,nll,auprc,train_rows");
  for (const auto& r : rows) {
    w.write_line(format_double(r.fraction) + "," + r.model + "," + format_double(r.report.nll) +
                 "," + format_double(r.report.auprc) + "," + std::to_string(r.rows));
  }
  w.commit();
  m.add_output(out, "ablation.csv", "report");
  m.write(out);
  return m;
}

RunManifest cmd_stack(const ExperimentConfig& config, const fs::path& prep_dir,
                      const fs::path& lr_model, const std::vector<fs::path>& ann_models,
                      const fs::path& out) {
  if (ann_models.empty()) throw ConfigError("stack needs at least one network model");
  RunManifest m = start("stack", config, out);
  SplitCache splits(prep_dir, m);
  const std::string fit_name = config.stack_train_split;
  const VectorizedDataset& fit = splits.get(fit_name, false);
  const VectorizedDataset& test = splits.get("test", false);

  struct Outputs {
    std::vector<double> fit, test;
  };
  const auto outputs_of = [&](const CtrModel& model) {
    return Outputs{clamp_open(model.predict_all(splits.matching(fit_name, model))),
                   clamp_open(model.predict_all(splits.matching("test", model)))};
  };
  m.add_input(lr_model, "model");
  const Outputs lr = outputs_of(*load_model(lr_model));

  std::vector<Outputs> anns;
  std::size_t best = 0;
  double best_valid = 0.0;
  for (std::size_t i = 0; i < ann_models.size(); ++i) {
    m.add_input(ann_models[i], "model");
    const auto model = load_model(ann_models[i]);
    anns.push_back(outputs_of(*model));
    const VectorizedDataset& valid = splits.matching("valid", *model);
    const double v = fit_name == "valid"
                         ? nll(make_pairs(anns.back().fit, fit.labels))
                         : nll(make_pairs(model->predict_all(valid), valid.labels));
    if (i == 0 || v < best_valid) {
      best = i;
      best_valid = v;
    }
  }
  std::vector<std::vector<double>> ann_fit, ann_test;
  for (const auto& a : anns) {
    ann_fit.push_back(a.fit);
    ann_test.push_back(a.test);
  }
  const Outputs ensemble{clamp_open(average_predictions(ann_fit)),
                         clamp_open(average_predictions(ann_test))};

  struct Variant {
    std::string name;
    std::vector<NamedColumn> fit, test;
  };
  std::vector<Variant> variants = {
      {"baseline", {}, {}},
      {"lr", {{"lr", lr.fit}}, {{"lr", lr.test}}},
      {"ann", {{"ann", anns[best].fit}}, {{"ann", anns[best].test}}},
      {"ensemble", {{"ensemble", ensemble.fit}}, {{"ensemble", ensemble.test}}},
  };
  const fs::path oracle_fit = prep_dir / ("oracle_" + fit_name + ".txt");
  const fs::path oracle_test = prep_dir / "oracle_test.txt";
  if (fs::exists(oracle_fit) && fs::exists(oracle_test)) {
    m.add_input(oracle_fit, "oracle_" + fit_name);
    m.add_input(oracle_test, "oracle_test");
    variants.push_back({"oracle",
                        {{"oracle", clamp_open(read_oracle(oracle_fit))}},
                        {{"oracle", clamp_open(read_oracle(oracle_test))}}});
  }

  const DenseMatrix base_fit = dense_features(fit);
  const DenseMatrix base_test = dense_features(test);
  LineWriter w(out / "stack.csv");
  w.write_line("model,delta_nll,auprc,delta_auprc,nll");
  MetricsReport baseline;
  for (const auto& v : variants) {
    const DenseMatrix mf = stack(base_fit, v.fit);
    const GbdtTrainResult trained = train_gbdt(mf, fit.labels, config.boost);
    const MetricsReport r = evaluate(trained.model.predict_batch(stack(base_test, v.test)),
                                     test.labels);
    if (v.name == "baseline") baseline = r;
    const MetricDeltas d = deltas(baseline, r);
    w.write_line(v.name + "," + format_double(d.nll_pct) + "," + format_double(r.auprc) + "," +
                 format_double(d.auprc_pct) + "," + format_double(r.nll));
    const std::string file = "stack_" + v.name + ".gbdt";
    trained.model.save(out / file);
    nlohmann::json side;
    side["columns"] = trained.model.column_names;
    side["boost"] = {{"trees", config.boost.n_trees},     {"depth", config.boost.depth},
                     {"shrinkage", config.boost.shrinkage}, {"bins", config.boost.bins},
                     {"leaf_l2", config.boost.leaf_l2},     {"seed", config.boost.seed}};
    side["fit_split"] = fit_name;
    // The boosted stage stands in for an unpublished system; its defaults are ours.
    side["defaults_are_stand_ins"] = true;
    side["tool_version"] = std::string(kToolVersion);
    write_text_atomic(out / (file + ".json"), side.dump(2) + "\n");
    m.add_output(out, file, "model");
    m.add_output(out, file + ".json", "model");
    m.metrics["nll_" + v.name] = r.nll;
    m.metrics["auprc_" + v.name] = r.auprc;
  }
  w.commit();
  m.add_output(out, "stack.csv", "report");
  m.write(out);
  return m;
}

RunManifest cmd_rank_ads(const ExperimentConfig& config, const fs::path& candidates, std::size_t k,
                         const fs::path& out) {
  RunManifest m = start("rank-ads", config, out);
  m.add_input(candidates, "candidates");
  const auto ads = read_candidates_csv(candidates);
  write_candidates_csv(out / "display.csv", select_ads(ads, k));
  m.add_output(out, "display.csv", "report");
  m.write(out);
  return m;
}

}  // namespace ctrnet
