// Copyright 2026 The synthcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "synthcat/statmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "synthcat/error.hpp"
#include "test_util.hpp"

namespace synthcat {
namespace {

using testing::MakeCodebook;
using testing::RandomDataset;

std::vector<int> LogisticResponse(const DesignMatrix& d, const Eigen::VectorXd& beta,
                                  std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::VectorXd eta = d.x * beta;
  std::vector<int> y(static_cast<std::size_t>(eta.size()));
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    y[static_cast<std::size_t>(i)] = u(gen) < 1.0 / (1.0 + std::exp(-eta[i]));
  }
  return y;
}

// Cyclic coordinate ascent with one-dimensional Newton steps.
Eigen::VectorXd CoordinateAscentOracle(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd yv(n);
  for (Eigen::Index i = 0; i < n; ++i) yv[i] = y[static_cast<std::size_t>(i)];
  Eigen::VectorXd b = Eigen::VectorXd::Zero(x.cols());
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const Eigen::ArrayXd p = 1.0 / (1.0 + (-eta).array().exp());
      const double g = x.col(j).dot((yv.array() - p).matrix());
      const double h = (x.col(j).array().square() * p * (1.0 - p)).sum();
      const double step = g / h;
      b[j] += step;
      eta += step * x.col(j);
    }
    const Eigen::ArrayXd p = 1.0 / (1.0 + (-eta).array().exp());
    if ((x.transpose() * (yv.array() - p).matrix()).norm() < 1e-11) break;
  }
  return b;
}

TEST(DesignMatrixTest, DummyCodingUsesFirstLevelAsReference) {
  const auto cb = Codebook({{"Sex", {"M", "F"}, false}, {"Grade", {"9", "10", "11"}, false}});
  const CategoricalDataset d(cb, {1, 1, 2, 3, 2, 2, 1, 3});
  const std::vector<std::size_t> vars = {0, 1};
  const auto m = DummyEncode(d, vars);
  EXPECT_EQ(m.labels, (std::vector<std::string>{"(Intercept)", "Sex=F", "Grade=10", "Grade=11"}));
  EXPECT_EQ(m.x.row(1), Eigen::RowVector4d(1, 1, 0, 1));
}

TEST(DesignMatrixTest, ConstantAndDependentColumnsArePruned) {
  const auto cb = MakeCodebook({3, 2});
  // Level 3 of V0 never occurs; V1 duplicates V0's level-2 indicator.
  const CategoricalDataset d(cb, {1, 1, 2, 2, 1, 1, 2, 2, 1, 1});
  const std::vector<std::size_t> vars = {0, 1};
  const auto m = BuildDesign(d, vars);
  EXPECT_EQ(m.labels, (std::vector<std::string>{"(Intercept)", "V0=2"}));
  EXPECT_EQ(m.pruned, (std::vector<std::string>{"V0=3", "V1=2"}));
}

TEST(FitLogisticTest, InterceptOnlyIsLogOdds) {
  DesignMatrix m;
  m.labels = {"(Intercept)"};
  m.x = Eigen::MatrixXd::Ones(80, 1);
  std::vector<int> y(80, 0);
  for (int i = 0; i < 20; ++i) y[static_cast<std::size_t>(i) * 4] = 1;
  const auto fit = FitLogistic(m, y);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.coefficients[0], std::log(0.25 / 0.75), 1e-10);
  // Observed information for the intercept: n p (1 - p).
  EXPECT_NEAR(fit.covariance(0, 0), 1.0 / (80 * 0.25 * 0.75), 1e-10);
}

TEST(FitLogisticTest, MatchesCoordinateAscentOracle) {
  const auto cb = MakeCodebook({3, 2, 4});
  const auto d = RandomDataset(cb, 200, 21);
  const std::vector<std::size_t> vars = {0, 1, 2};
  const auto m = BuildDesign(d, vars);
  Eigen::VectorXd beta(m.x.cols());
  beta << -0.3, 0.8, -0.5, 0.6, 0.2, -0.7, 0.4;
  const auto y = LogisticResponse(m, beta, 5);
  const auto fit = FitLogistic(m, y);
  ASSERT_TRUE(fit.converged);
  const Eigen::VectorXd oracle = CoordinateAscentOracle(m.x, y);
  EXPECT_LT((fit.coefficients - oracle).cwiseAbs().maxCoeff(), 1e-6);
  for (std::size_t i = 1; i < fit.log_likelihood_trace.size(); ++i) {
    EXPECT_GE(fit.log_likelihood_trace[i], fit.log_likelihood_trace[i - 1]);
  }
  EXPECT_TRUE((fit.covariance.diagonal().array() > 0.0).all());
  EXPECT_LT((fit.covariance - fit.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FitLogisticTest, PermutedLabelsGiveNullCoefficients) {
  const auto cb = MakeCodebook({3, 2, 2});
  const auto d = RandomDataset(cb, 2000, 31);
  const std::vector<std::size_t> vars = {0, 1, 2};
  const auto m = BuildDesign(d, vars);
  std::vector<int> y(2000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 3 == 0;
  std::shuffle(y.begin(), y.end(), std::mt19937_64(2));
  const auto fit = FitLogistic(m, y);
  const Eigen::VectorXd se = fit.StandardErrors();
  for (Eigen::Index c = 1; c < fit.coefficients.size(); ++c) {
    EXPECT_LT(std::abs(fit.coefficients[c]), 3 * se[c]) << fit.labels[static_cast<std::size_t>(c)];
  }
}

TEST(FitLogisticTest, CompleteSeparationIsFlagged) {
  const auto cb = MakeCodebook({2});
  const CategoricalDataset d(cb, {1, 1, 1, 2, 2, 2});
  const std::vector<std::size_t> vars = {0};
  const auto m = BuildDesign(d, vars);
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  const auto fit = FitLogistic(m, y);
  EXPECT_FALSE(fit.converged);
  EXPECT_TRUE(fit.separated);
  EXPECT_TRUE(fit.coefficients.allFinite());
  EXPECT_LE(fit.coefficients.cwiseAbs().maxCoeff(), 30.0);
}

TEST(FitLogisticTest, SingleClassResponseIsAnError) {
  DesignMatrix m;
  m.labels = {"(Intercept)"};
  m.x = Eigen::MatrixXd::Ones(4, 1);
  const std::vector<int> y = {1, 1, 1, 1};
  EXPECT_THROW(FitLogistic(m, y), ValidationError);
}

TEST(PredictProbaTest, ZeroCoefficientsGiveOneHalf) {
  LogisticFit fit;
  fit.labels = {"(Intercept)", "a"};
  fit.coefficients = Eigen::Vector2d::Zero();
  DesignMatrix m;
  m.labels = fit.labels;
  m.x = Eigen::MatrixXd::Ones(3, 2);
  EXPECT_TRUE((PredictProba(fit, m).array() == 0.5).all());
}

TEST(PredictProbaTest, ClampedAwayFromZeroAndOne) {
  LogisticFit fit;
  fit.labels = {"(Intercept)"};
  fit.coefficients = Eigen::VectorXd::Constant(1, 1e6);
  DesignMatrix m;
  m.labels = fit.labels;
  m.x = Eigen::MatrixXd::Ones(2, 1);
  EXPECT_EQ(PredictProba(fit, m)[0], 1.0 - 1e-12);
  fit.coefficients[0] = -1e6;
  EXPECT_EQ(PredictProba(fit, m)[0], 1e-12);
}

TEST(PredictProbaTest, MonotoneInPositiveCoefficientColumn) {
  LogisticFit fit;
  fit.labels = {"(Intercept)", "a"};
  fit.coefficients = Eigen::Vector2d(0.1, 0.7);
  DesignMatrix m;
  m.labels = fit.labels;
  m.x.resize(5, 2);
  for (int i = 0; i < 5; ++i) m.x.row(i) << 1.0, 0.25 * i;
  const auto p = PredictProba(fit, m);
  for (int i = 1; i < 5; ++i) EXPECT_GT(p[i], p[i - 1]);
}

TEST(PredictProbaTest, LabelMismatchIsAnError) {
  LogisticFit fit;
  fit.labels = {"(Intercept)", "a"};
  fit.coefficients = Eigen::Vector2d::Zero();
  DesignMatrix m;
  m.labels = {"(Intercept)", "b"};
  m.x = Eigen::MatrixXd::Ones(1, 2);
  EXPECT_THROW(PredictProba(fit, m), ValidationError);
}

// V2 = V0 when V0 < 3, else 1; V1 is noise.
CategoricalDataset RuleDataset(std::size_t n, std::uint64_t seed, double noise) {
  const auto cb = MakeCodebook({4, 3, 2});
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> cells;
  for (std::size_t i = 0; i < n; ++i) {
    const int a = 1 + static_cast<int>(gen() % 4);
    const int b = 1 + static_cast<int>(gen() % 3);
    int y = a < 3 ? a : 1;
    if (u(gen) < noise) y = 3 - y;
    cells.insert(cells.end(), {a, b, y});
  }
  return CategoricalDataset(cb, cells);
}

TEST(ForestTest, DeterministicTargetHasZeroTrainingError) {
  const auto d = RuleDataset(300, 1, 0.0);
  ForestParams p;
  p.n_trees = 50;
  const std::vector<std::size_t> preds = {0, 1};
  const auto model = FitForest(d, 2, preds, p, 7);
  const auto pred = PredictClass(model, d);
  for (std::size_t i = 0; i < d.rows(); ++i) ASSERT_EQ(pred[i], d.at(i, 2));
}

TEST(ForestTest, ConstantTargetGivesFlaggedConstantModel) {
  const auto cb = MakeCodebook({3, 2});
  std::vector<int> cells;
  for (int i = 0; i < 30; ++i) cells.insert(cells.end(), {1 + i % 3, 2});
  const CategoricalDataset d(cb, cells);
  const std::vector<std::size_t> preds = {0};
  const auto model = FitForest(d, 1, preds, ForestParams{}, 1);
  EXPECT_TRUE(model.constant);
  const auto pred = PredictClass(model, d);
  EXPECT_TRUE(std::all_of(pred.begin(), pred.end(), [](int c) { return c == 2; }));
}

TEST(ForestTest, HeldOutAccuracyBeatsMajorityBaseline) {
  const auto train = RuleDataset(500, 2, 0.15);
  const auto test = RuleDataset(500, 3, 0.15);
  ForestParams p;
  p.n_trees = 100;
  const std::vector<std::size_t> preds = {0, 1};
  const auto model = FitForest(train, 2, preds, p, 11);
  const auto pred = PredictClass(model, test);
  int correct = 0, ones = 0;
  for (std::size_t i = 0; i < test.rows(); ++i) {
    correct += pred[i] == test.at(i, 2);
    ones += test.at(i, 2) == 1;
  }
  const int majority = std::max(ones, 500 - ones);
  EXPECT_GT(correct, majority);
}

TEST(ForestTest, StructureInvariantsAndSeedDeterminism) {
  const auto d = RuleDataset(200, 4, 0.2);
  ForestParams p;
  p.n_trees = 25;
  const std::vector<std::size_t> preds = {0, 1};
  const auto a = FitForest(d, 2, preds, p, 5);
  const auto b = FitForest(d, 2, preds, p, 5);
  ASSERT_EQ(a.trees.size(), 25u);
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    ASSERT_EQ(a.trees[t].nodes.size(), b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      const auto& node = a.trees[t].nodes[k];
      EXPECT_EQ(node.distribution, b.trees[t].nodes[k].distribution);
      if (node.feature < 0) {
        const double s = std::accumulate(node.distribution.begin(),
                                         node.distribution.end(), 0.0);
        EXPECT_NEAR(s, 1.0, 1e-12);
      }
    }
  }
  EXPECT_EQ(PredictClass(a, d), PredictClass(b, d));
}

TEST(ForestTest, PredictionIndependentOfTreeOrder) {
  const auto d = RuleDataset(200, 6, 0.3);
  ForestParams p;
  p.n_trees = 31;
  const std::vector<std::size_t> preds = {0, 1};
  auto model = FitForest(d, 2, preds, p, 8);
  const auto before = PredictClassShare(model, d, 1);
  std::reverse(model.trees.begin(), model.trees.end());
  const auto after = PredictClassShare(model, d, 1);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
  std::reverse(model.trees.begin(), model.trees.end());
  auto reversed = model;
  std::reverse(reversed.trees.begin(), reversed.trees.end());
  EXPECT_EQ(PredictClass(model, d), PredictClass(reversed, d));
}

}  // namespace
}  // namespace synthcat
