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

#include <cmath>

#include "ctrnet/ensemble.h"
#include "ctrnet/error.h"
#include "ctrnet/linearmodel.h"
#include "ctrnet/sparsenet.h"
#include "ctrnet/text_io.h"
#include "test_util.h"

namespace ctrnet {
namespace {

// Predicts a fixed value for every input.
class ConstModel final : public CtrModel {
 public:
  ConstModel(double p, HashConfig h = HashConfig{10, 0}) : p_(p), hash_(h) {}
  double predict(const SparseVector&) const override { return p_; }
  const HashConfig& hash_config() const override { return hash_; }
  std::string_view kind() const override { return "const"; }

 private:
  double p_;
  HashConfig hash_;
};

VectorizedDataset random_dataset(Rng& rng, std::uint64_t dim, std::size_t n) {
  VectorizedDataset ds;
  ds.hash = HashConfig{dim, 0};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::uint32_t, double>> e;
    for (int k = 0; k < 4; ++k) e.emplace_back(rng.below(dim), 1.0);
    ds.rows.push_back(SparseVector::from_pairs(e));
    ds.labels.push_back(rng.bernoulli(0.2));
    ds.bids.push_back(0.0);
  }
  return ds;
}

std::vector<std::shared_ptr<const CtrModel>> random_mlps(std::uint64_t dim, int n) {
  std::vector<std::shared_ptr<const CtrModel>> out;
  for (int i = 0; i < n; ++i) {
    MlpArchitecture arch;
    arch.input_dim = dim;
    arch.hidden_sizes = {static_cast<std::size_t>(3 + i)};
    out.push_back(std::make_shared<MlpModel>(
        MlpModel::initialize(arch, HashConfig{dim, 0}, 100 + i)));
  }
  return out;
}

TEST(Ensemble, Arithmetic) {
  const SparseVector x;
  auto a = std::make_shared<ConstModel>(0.2);
  auto b = std::make_shared<ConstModel>(0.4);
  EXPECT_NEAR(EnsembleModel({a, b}).predict(x), 0.3, 1e-15);
  EXPECT_EQ(EnsembleModel({a, a, a}).predict(x), 0.2);
  EXPECT_NEAR(EnsembleModel({a, b}, {0.25, 0.75}).predict(x), 0.35, 1e-15);
}

TEST(Ensemble, ConfigErrors) {
  auto a = std::make_shared<ConstModel>(0.2);
  auto other = std::make_shared<ConstModel>(0.2, HashConfig{11, 0});
  EXPECT_THROW(EnsembleModel({}), ConfigError);
  EXPECT_THROW(EnsembleModel({a, other}), ConfigError);
  EXPECT_THROW(EnsembleModel({a, a}, {0.5, 0.6}), ConfigError);
  EXPECT_THROW(EnsembleModel({a, a}, {1.5, -0.5}), ConfigError);
  EXPECT_THROW(EnsembleModel({a, a}, {1.0}), ConfigError);
}

TEST(Ensemble, MatchesRecomputationFromDumpedMembers) {
  Rng rng(1);
  const auto test = random_dataset(rng, 50, 500);
  const auto members = random_mlps(50, 6);
  const EnsembleModel ens(members);
  std::vector<std::vector<double>> dumped;
  testing::TempDir dir("ens");
  for (std::size_t m = 0; m < members.size(); ++m) {
    // Round-trip each member's predictions through text like an external script would.
    std::string text;
    for (double p : members[m]->predict_all(test)) text += format_double(p) + "\n";
    const auto path = dir / ("p" + std::to_string(m) + ".txt");
    write_text_atomic(path, text);
    std::vector<double> col;
    for (const auto& line : read_lines(path)) col.push_back(*parse_double(line));
    dumped.push_back(col);
  }
  const auto ens_pred = ens.predict_all(test);
  const auto avg = average_predictions(dumped);
  for (std::size_t i = 0; i < test.size(); ++i) {
    double s = 0.0, lo = 1.0, hi = 0.0;
    for (const auto& col : dumped) {
      s += col[i];
      lo = std::min(lo, col[i]);
      hi = std::max(hi, col[i]);
    }
    EXPECT_NEAR(ens_pred[i], s / 6.0, 1e-12);
    EXPECT_NEAR(avg[i], s / 6.0, 1e-12);
    EXPECT_GE(ens_pred[i], lo - 1e-15);
    EXPECT_LE(ens_pred[i], hi + 1e-15);
  }

  // Uniform averaging ignores member order.
  auto reversed = members;
  std::reverse(reversed.begin(), reversed.end());
  const auto rev_pred = EnsembleModel(reversed).predict_all(test);
  for (std::size_t i = 0; i < test.size(); ++i) EXPECT_NEAR(rev_pred[i], ens_pred[i], 1e-15);

  // Jensen: ensemble NLL never exceeds the mean member NLL.
  double mean_member = 0.0;
  for (const auto& col : dumped) mean_member += nll(make_pairs(col, test.labels)) / 6.0;
  EXPECT_LE(nll(make_pairs(ens_pred, test.labels)), mean_member + 1e-12);
}

TEST(EnsembleCurve, PrefixSemantics) {
  Rng rng(2);
  const auto test = random_dataset(rng, 40, 400);
  const auto members = random_mlps(40, 4);
  const auto curve = ensemble_curve(members, test);
  ASSERT_EQ(curve.size(), 4u);
  const MetricsReport first = evaluate(members[0]->predict_all(test), test.labels);
  EXPECT_EQ(curve[0].k, 1u);
  EXPECT_EQ(curve[0].auprc, first.auprc);
  EXPECT_EQ(curve[0].nll, first.nll);
  for (std::size_t k = 1; k <= 4; ++k) {
    const EnsembleModel prefix({members.begin(), members.begin() + k});
    const MetricsReport r = evaluate(prefix.predict_all(test), test.labels);
    EXPECT_NEAR(curve[k - 1].nll, r.nll, 1e-12);
    EXPECT_NEAR(curve[k - 1].auprc, r.auprc, 1e-12);
  }

  const std::vector<std::shared_ptr<const CtrModel>> same(3, members[1]);
  const auto flat = ensemble_curve(same, test);
  for (const auto& pt : flat) {
    EXPECT_EQ(pt.nll, flat[0].nll);
    EXPECT_EQ(pt.auprc, flat[0].auprc);
  }

  VectorizedDataset empty;
  empty.hash = test.hash;
  EXPECT_THROW(ensemble_curve(members, empty), Error);
}

TEST(EnsembleCurve, Csv) {
  const std::vector<CurvePoint> c{{1, 0.25, 0.3}, {2, 0.5, 0.125}};
  testing::TempDir dir("curve");
  write_curve_csv(dir / "c.csv", c);
  EXPECT_EQ(read_lines(dir / "c.csv"),
            (std::vector<std::string>{"k,auprc,nll", "1,0.25,0.3", "2,0.5,0.125"}));
}

}  // namespace
}  // namespace ctrnet
