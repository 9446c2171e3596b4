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
#ifndef SYNTHCAT_STATMODELS_HPP_
#define SYNTHCAT_STATMODELS_HPP_

// Learners shared by the utility and risk metrics: binary logistic
// regression fitted by IRLS, and a bagged forest of categorical CART trees.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "synthcat/dataset.hpp"

namespace synthcat {

// Intercept plus one indicator per non-reference level. The reference level
// is the first codebook level of each variable. Labels read "var=level".
struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> labels;
  // Columns removed as constant or linearly dependent.
  std::vector<std::string> pruned;
};

DesignMatrix DummyEncode(const CategoricalDataset& data,
                         std::span<const std::size_t> variables);
// Rows of `top` followed by rows of `bottom`; labels must agree.
DesignMatrix StackRows(const DesignMatrix& top, const DesignMatrix& bottom);
// Drops constant non-intercept columns, then any column that is (numerically)
// a linear combination of the columns kept before it.
void PruneDegenerateColumns(DesignMatrix& design);
// DummyEncode + PruneDegenerateColumns.
DesignMatrix BuildDesign(const CategoricalDataset& data,
                         std::span<const std::size_t> variables);
// Columns of `design` re-ordered to `labels`; absent labels are zero
// columns. Used to score a fitted model on data encoded separately.
DesignMatrix AlignColumns(const DesignMatrix& design,
                          const std::vector<std::string>& labels);

struct LogisticOptions {
  // Convergence when the score norm divided by n falls below tol.
  double tol = 1e-10;
  int max_iter = 100;
  // Coefficients beyond this magnitude are taken as separation.
  double coef_cap = 30.0;
};

struct LogisticFit {
  std::vector<std::string> labels;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;  // inverse observed information at the optimum
  bool converged = false;
  bool separated = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  std::vector<double> log_likelihood_trace;  // one entry per accepted step

  Eigen::VectorXd StandardErrors() const;
};

// Newton/IRLS with step halving, so the log-likelihood never decreases.
// Throws ValidationError when y holds a single class or sizes disagree.
LogisticFit FitLogistic(const DesignMatrix& design, std::span<const int> y,
                        const LogisticOptions& options = {});

// Probabilities clamped to [1e-12, 1 - 1e-12]. Throws ValidationError when
// the design's labels differ from the fit's.
Eigen::VectorXd PredictProba(const LogisticFit& fit, const DesignMatrix& design);

struct ForestParams {
  int n_trees = 500;
  int max_depth = 0;  // 0 = unlimited
  int min_leaf = 5;
  int features_per_split = 0;  // 0 = ceil(sqrt(#predictors))
  bool bootstrap = true;
};

struct TreeNode {
  int feature = -1;  // index into ForestModel::predictors; -1 for a leaf
  std::vector<char> goes_left;  // per level of the split feature
  int left = -1;
  int right = -1;
  std::vector<double> distribution;  // class shares of the training rows here
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at 0
  std::uint64_t seed = 0;
};

struct ForestModel {
  ForestParams params;
  std::string target;
  std::vector<std::string> predictors;
  std::vector<int> predictor_arities;
  int classes = 0;
  std::vector<Tree> trees;
  // Set when the training target had a single class.
  bool constant = false;
  int constant_class = 0;  // 1-based
};

// Bagged CART with Gini splits on level subsets. Tree t draws its bootstrap
// sample and feature subsets from DeriveSeed(seed, kForest, t), so the forest
// does not depend on the order trees are grown in.
ForestModel FitForest(const CategoricalDataset& data, std::size_t target,
                      std::span<const std::size_t> predictors,
                      const ForestParams& params, std::uint64_t seed);

// Majority vote over trees; ties go to the lowest class. Predictors are
// looked up by name in `data`. Returns 1-based class levels.
std::vector<int> PredictClass(const ForestModel& model,
                              const CategoricalDataset& data);
// Mean over trees of the leaf share of `level` (1-based).
std::vector<double> PredictClassShare(const ForestModel& model,
                                      const CategoricalDataset& data, int level);

}  // namespace synthcat

#endif  // SYNTHCAT_STATMODELS_HPP_
