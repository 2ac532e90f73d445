// Copyright 2026 The qfmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qfm/data.hpp"
#include "qfm/kernels.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/svm.hpp"
#include "test_support.hpp"

using namespace qfm;

namespace {

svm::SvmModel train_linear_1d() {
  const SampleList x{{0.0}, {2.0}};
  const std::vector<int> y{+1, -1};
  return svm::train_smo(gram(LinearKernel{}, x), y);
}

double alpha_y_sum(const svm::SvmModel& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.alphas.size(); ++i) s += m.alphas[i] * m.train_labels[i];
  return s;
}

}  // namespace

TEST(Smo, OneDimensionalHardMargin) {
  const auto m = train_linear_1d();
  EXPECT_NEAR(m.alphas[0], 0.5, 1e-6);
  EXPECT_NEAR(m.alphas[1], 0.5, 1e-6);
  EXPECT_NEAR(m.bias, 1.0, 1e-6);
  const auto f = svm::decision_values(m, cross_gram(LinearKernel{}, SampleList{{1.0}}, SampleList{{0.0}, {2.0}}));
  EXPECT_NEAR(f[0], 0.0, 1e-6);
}

TEST(Smo, DecisionValuesShapes) {
  const auto m = train_linear_1d();
  EXPECT_TRUE(svm::decision_values(m, KernelMatrix(0, 2)).empty());
  EXPECT_THROW(svm::decision_values(m, KernelMatrix::Zero(1, 3)), DimensionError);
}

TEST(Smo, SignOfZeroIsPositive) {
  const auto labels = svm::predict_labels(std::vector<double>{0.0, -0.0, -1e-300, 2.0});
  EXPECT_EQ(labels, (std::vector<int>{+1, +1, -1, +1}));
}

TEST(Smo, InputValidation) {
  const KernelMatrix k = KernelMatrix::Identity(3, 3);
  EXPECT_THROW(svm::train_smo(k, std::vector<int>{1, 1, 1}), DegenerateLabelsError);
  EXPECT_THROW(svm::train_smo(k, std::vector<int>{1, 0, -1}), ValidationError);
  KernelMatrix asym = k;
  asym(0, 1) = 0.5;
  EXPECT_THROW(svm::train_smo(asym, std::vector<int>{1, -1, 1}), InvalidKernelError);
  EXPECT_THROW(svm::train_smo(KernelMatrix::Zero(2, 3), std::vector<int>{1, -1}), InvalidKernelError);
}

TEST(Accuracy, Values) {
  EXPECT_DOUBLE_EQ(svm::accuracy(std::vector<int>{1, -1, 1}, std::vector<int>{1, -1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(svm::accuracy(std::vector<int>{1, -1}, std::vector<int>{-1, 1}), 0.0);
  std::vector<int> truth(40, 1), pred(40, 1);
  for (int i = 0; i < 4; ++i) pred[static_cast<std::size_t>(i)] = -1;
  EXPECT_DOUBLE_EQ(svm::accuracy(pred, truth), 0.9);
  EXPECT_THROW(svm::accuracy(std::vector<int>{1}, std::vector<int>{1, 1}), DimensionError);
  EXPECT_THROW(svm::accuracy(std::vector<int>{}, std::vector<int>{}), ValidationError);
}

TEST(Smo, MatchesBruteForceOnSmallFixtures) {
  auto rng = make_rng(31, {});
  const auto zz = zz_feature_map_with_transform();
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 3 + t % 4;
    SampleList x;
    std::vector<int> y;
    for (int i = 0; i < n; ++i) {
      x.push_back(qfm::testing::random_point(rng, 2, 0.0, 3.0));
      y.push_back(i % 2 == 0 ? 1 : -1);
    }
    const Kernel kernel = t % 3 == 0 ? Kernel{QuantumKernel{zz, 0, 0}} : Kernel{RbfKernel{0.5 + t % 5}};
    const double C = t % 2 == 0 ? 1000.0 : 1.0;
    const auto K = gram(kernel, x);
    svm::SvmConfig cfg;
    cfg.C = C;
    const auto m = svm::train_smo(K, y, cfg);
    const double ref = qfm::testing::brute_force_dual(K, y, C);
    EXPECT_NEAR(svm::dual_objective(K, y, m.alphas), ref, 1e-4) << "fixture " << t;
    EXPECT_LE(svm::kkt_residual(m, K), cfg.tol) << "fixture " << t;
    ++checked;
  }
  EXPECT_EQ(checked, 60);
}

TEST(Smo, FeasibilityAndObjectiveOnMoons) {
  const auto d = data::moons_split(2);
  const auto K = gram(RbfKernel{0.5}, d.train_features());
  const auto y = d.train_labels();
  const auto m = svm::train_smo(K, y);
  EXPECT_TRUE(m.converged);
  EXPECT_NEAR(alpha_y_sum(m), 0.0, 1e-8);
  for (double a : m.alphas) {
    EXPECT_GE(a, -1e-12);
    EXPECT_LE(a, m.C + 1e-12);
  }
  EXPECT_GT(svm::dual_objective(K, y, m.alphas), 0.0);
  EXPECT_LE(svm::kkt_residual(m, K), 1e-3);
  for (std::size_t i = 0; i < m.alphas.size(); ++i)
    EXPECT_EQ(m.alphas[i] > 1e-8,
              std::find(m.support_indices.begin(), m.support_indices.end(), static_cast<int>(i)) !=
                  m.support_indices.end());
}

TEST(Smo, TrainingSetAccuracyOnSeparableData) {
  const auto d = data::moons_split(4, 140, 0.0);
  const auto xtr = d.train_features();
  const auto m = svm::train_smo(gram(RbfKernel{0.5}, xtr), d.train_labels());
  const auto f = svm::decision_values(m, cross_gram(RbfKernel{0.5}, xtr, xtr));
  EXPECT_DOUBLE_EQ(svm::accuracy(svm::predict_labels(f), d.train_labels()), 1.0);
}

TEST(Smo, FreeSupportVectorsSitOnTheMargin) {
  const auto d = data::moons_split(5);
  const auto xtr = d.train_features();
  const auto K = gram(RbfKernel{0.5}, xtr);
  const auto m = svm::train_smo(K, d.train_labels());
  const auto f = svm::decision_values(m, K);
  for (int i : m.support_indices) {
    const auto u = static_cast<std::size_t>(i);
    if (m.alphas[u] < m.C - 1e-6) EXPECT_NEAR(f[u] * m.train_labels[u], 1.0, 1e-3);
  }
}

TEST(Smo, DuplicatingNonSupportPointKeepsPredictions) {
  const auto d = data::moons_split(6);
  auto xtr = d.train_features();
  auto ytr = d.train_labels();
  const auto xte = d.test_features();
  const auto m = svm::train_smo(gram(RbfKernel{0.5}, xtr), ytr);
  const auto before = svm::decision_values(m, cross_gram(RbfKernel{0.5}, xte, xtr));
  std::size_t pick = 0;
  while (m.alphas[pick] > 1e-8) ++pick;
  xtr.push_back(xtr[pick]);
  ytr.push_back(ytr[pick]);
  const auto m2 = svm::train_smo(gram(RbfKernel{0.5}, xtr), ytr);
  const auto after = svm::decision_values(m2, cross_gram(RbfKernel{0.5}, xte, xtr));
  EXPECT_EQ(svm::predict_labels(before), svm::predict_labels(after));
}

TEST(Smo, ConstantKernelTerminates) {
  const KernelMatrix K = KernelMatrix::Ones(20, 20);
  std::vector<int> y(20);
  for (int i = 0; i < 20; ++i) y[static_cast<std::size_t>(i)] = i % 3 == 0 ? 1 : -1;
  const auto m = svm::train_smo(K, y);
  EXPECT_EQ(m.alphas.size(), 20u);
  EXPECT_TRUE(std::isfinite(m.bias));
}

TEST(Pipeline, RbfMoonsBaseline) {
  const auto ev = fit_and_score(RbfKernel{0.5}, data::moons_split(1));
  EXPECT_DOUBLE_EQ(ev.accuracy, 1.0);
}
