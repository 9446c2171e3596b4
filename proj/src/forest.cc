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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "synthcat/error.hpp"
#include "synthcat/random.hpp"
#include "synthcat/statmodels.hpp"

namespace synthcat {
namespace {

// Training view: 0-based codes, predictors row-major.
struct TrainingSet {
  std::size_t rows = 0;
  std::size_t features = 0;
  std::vector<int> x;
  std::vector<int> y;
  std::vector<int> arities;
  int classes = 0;

  int feature(std::size_t i, std::size_t f) const { return x[i * features + f]; }
};

struct Split {
  int feature = -1;
  double score = 0.0;
  std::vector<char> goes_left;
};

// Sum over classes of count^2 / n, the quantity Gini minimization maximizes.
double Purity(const std::vector<double>& counts, double n) {
  if (n <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += c * c;
  return s / n;
}

std::vector<double> ClassCounts(const TrainingSet& ts,
                                std::span<const std::size_t> rows) {
  std::vector<double> counts(static_cast<std::size_t>(ts.classes), 0.0);
  for (std::size_t i : rows) counts[static_cast<std::size_t>(ts.y[i])] += 1.0;
  return counts;
}

Split BestSplitOnFeature(const TrainingSet& ts, std::span<const std::size_t> rows,
                         std::size_t f, int reference_class, int min_leaf) {
  const int levels = ts.arities[f];
  const auto c = static_cast<std::size_t>(ts.classes);
  std::vector<std::vector<double>> counts(static_cast<std::size_t>(levels),
                                          std::vector<double>(c, 0.0));
  std::vector<double> level_n(static_cast<std::size_t>(levels), 0.0);
  for (std::size_t i : rows) {
    const auto l = static_cast<std::size_t>(ts.feature(i, f));
    counts[l][static_cast<std::size_t>(ts.y[i])] += 1.0;
    level_n[l] += 1.0;
  }
  std::vector<int> present;
  for (int l = 0; l < levels; ++l) {
    if (level_n[static_cast<std::size_t>(l)] > 0.0) present.push_back(l);
  }
  Split best;
  if (present.size() < 2) return best;
  const auto ref = static_cast<std::size_t>(reference_class);
  std::stable_sort(present.begin(), present.end(), [&](int a, int b) {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    return counts[ua][ref] / level_n[ua] < counts[ub][ref] / level_n[ub];
  });

  std::vector<double> left(c, 0.0);
  std::vector<double> total(c, 0.0);
  for (int l : present) {
    for (std::size_t k = 0; k < c; ++k) total[k] += counts[static_cast<std::size_t>(l)][k];
  }
  const double n = static_cast<double>(rows.size());
  double n_left = 0.0;
  std::size_t best_prefix = 0;
  for (std::size_t s = 0; s + 1 < present.size(); ++s) {
    const auto l = static_cast<std::size_t>(present[s]);
    for (std::size_t k = 0; k < c; ++k) left[k] += counts[l][k];
    n_left += level_n[l];
    const double n_right = n - n_left;
    if (n_left < min_leaf || n_right < min_leaf) continue;
    std::vector<double> right(c);
    for (std::size_t k = 0; k < c; ++k) right[k] = total[k] - left[k];
    const double score = Purity(left, n_left) + Purity(right, n_right);
    if (best.feature < 0 || score > best.score) {
      best.feature = static_cast<int>(f);
      best.score = score;
      best_prefix = s + 1;
    }
  }
  if (best.feature < 0) return best;
  best.goes_left.assign(static_cast<std::size_t>(levels), 0);
  double n_in_left = 0.0;
  for (std::size_t s = 0; s < best_prefix; ++s) {
    best.goes_left[static_cast<std::size_t>(present[s])] = 1;
    n_in_left += level_n[static_cast<std::size_t>(present[s])];
  }
  // Levels unseen at this node follow the larger child.
  const char unseen = n_in_left >= n - n_in_left ? 1 : 0;
  for (int l = 0; l < levels; ++l) {
    if (level_n[static_cast<std::size_t>(l)] == 0.0) {
      best.goes_left[static_cast<std::size_t>(l)] = unseen;
    }
  }
  return best;
}

Tree GrowTree(const TrainingSet& ts, const ForestParams& params, int mtry,
              std::uint64_t seed) {
  Rng rng(seed);
  Tree tree;
  tree.seed = seed;
  std::vector<std::size_t> sample(ts.rows);
  if (params.bootstrap) {
    for (auto& s : sample) s = rng.UniformIndex(ts.rows);
  } else {
    std::iota(sample.begin(), sample.end(), 0);
  }

  struct Pending {
    int node;
    std::vector<std::size_t> rows;
    int depth;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(sample), 0});
  std::vector<std::size_t> features(ts.features);
  std::iota(features.begin(), features.end(), 0);

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    const auto counts = ClassCounts(ts, job.rows);
    const double n = static_cast<double>(job.rows.size());
    {
      auto& node = tree.nodes[static_cast<std::size_t>(job.node)];
      node.distribution.resize(counts.size());
      for (std::size_t k = 0; k < counts.size(); ++k) node.distribution[k] = counts[k] / n;
    }
    const int majority = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    const bool pure = counts[static_cast<std::size_t>(majority)] == n;
    const bool too_small = n < 2.0 * params.min_leaf;
    const bool too_deep = params.max_depth > 0 && job.depth >= params.max_depth;
    if (pure || too_small || too_deep) continue;

    // Partial Fisher-Yates: the first mtry entries are the candidates.
    for (int s = 0; s < mtry; ++s) {
      const std::size_t pick =
          static_cast<std::size_t>(s) + rng.UniformIndex(features.size() - static_cast<std::size_t>(s));
      std::swap(features[static_cast<std::size_t>(s)], features[pick]);
    }
    Split best;
    for (int s = 0; s < mtry; ++s) {
      Split cand = BestSplitOnFeature(ts, job.rows, features[static_cast<std::size_t>(s)],
                                      majority, params.min_leaf);
      if (cand.feature >= 0 && (best.feature < 0 || cand.score > best.score)) {
        best = std::move(cand);
      }
    }
    if (best.feature < 0 || best.score <= Purity(counts, n) + 1e-12) continue;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t i : job.rows) {
      const auto l = static_cast<std::size_t>(ts.feature(i, static_cast<std::size_t>(best.feature)));
      (best.goes_left[l] ? left_rows : right_rows).push_back(i);
    }
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int right = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    auto& node = tree.nodes[static_cast<std::size_t>(job.node)];
    node.feature = best.feature;
    node.goes_left = std::move(best.goes_left);
    node.left = left;
    node.right = right;
    stack.push_back({right, std::move(right_rows), job.depth + 1});
    stack.push_back({left, std::move(left_rows), job.depth + 1});
  }
  return tree;
}

const TreeNode& Leaf(const Tree& tree, std::span<const int> codes) {
  const TreeNode* node = &tree.nodes[0];
  while (node->feature >= 0) {
    const auto l = static_cast<std::size_t>(codes[static_cast<std::size_t>(node->feature)]);
    node = &tree.nodes[static_cast<std::size_t>(node->goes_left[l] ? node->left : node->right)];
  }
  return *node;
}

// Predictor codes (0-based) for every row, looked up by name.
std::vector<int> PredictorCodes(const ForestModel& model,
                                const CategoricalDataset& data) {
  std::vector<std::size_t> cols;
  for (std::size_t f = 0; f < model.predictors.size(); ++f) {
    const std::size_t j = data.codebook().IndexOf(model.predictors[f]);
    if (data.codebook()[j].arity() != model.predictor_arities[f]) {
      throw ValidationError("forest: predictor '" + model.predictors[f] +
                            "' has a different level count than in training");
    }
    cols.push_back(j);
  }
  data.RequireComplete("forest prediction");
  std::vector<int> codes(data.rows() * cols.size());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t f = 0; f < cols.size(); ++f) {
      codes[i * cols.size() + f] = data.at(i, cols[f]) - 1;
    }
  }
  return codes;
}

}  // namespace

ForestModel FitForest(const CategoricalDataset& data, std::size_t target,
                      std::span<const std::size_t> predictors,
                      const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees < 1) throw ValidationError("forest: n_trees must be >= 1");
  if (params.min_leaf < 1) throw ValidationError("forest: min_leaf must be >= 1");
  if (predictors.empty()) throw ValidationError("forest: no predictors");
  if (target >= data.cols()) throw ValidationError("forest: bad target");
  for (std::size_t p : predictors) {
    if (p == target) throw ValidationError("forest: target listed as a predictor");
    if (p >= data.cols()) throw ValidationError("forest: bad predictor");
  }
  data.RequireComplete("forest");
  const auto& cb = data.codebook();

  ForestModel model;
  model.params = params;
  model.target = cb[target].name;
  model.classes = cb[target].arity();
  TrainingSet ts;
  ts.rows = data.rows();
  ts.features = predictors.size();
  ts.classes = model.classes;
  for (std::size_t p : predictors) {
    model.predictors.push_back(cb[p].name);
    model.predictor_arities.push_back(cb[p].arity());
    ts.arities.push_back(cb[p].arity());
  }
  ts.x.resize(ts.rows * ts.features);
  ts.y.resize(ts.rows);
  for (std::size_t i = 0; i < ts.rows; ++i) {
    ts.y[i] = data.at(i, target) - 1;
    for (std::size_t f = 0; f < ts.features; ++f) {
      ts.x[i * ts.features + f] = data.at(i, predictors[f]) - 1;
    }
  }
  const bool single = std::all_of(ts.y.begin(), ts.y.end(),
                                  [&](int v) { return v == ts.y[0]; });
  model.constant = single;
  model.constant_class = single ? ts.y[0] + 1 : 0;

  int mtry = params.features_per_split;
  if (mtry <= 0) {
    mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(ts.features))));
  }
  mtry = std::clamp(mtry, 1, static_cast<int>(ts.features));

  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  const unsigned workers = std::max(
      1u, std::min(std::thread::hardware_concurrency(),
                   static_cast<unsigned>(params.n_trees)));
  auto grow = [&](unsigned w) {
    for (std::size_t t = w; t < model.trees.size(); t += workers) {
      model.trees[t] = GrowTree(ts, params, mtry, DeriveSeed(seed, StreamPhase::kForest, t));
    }
  };
  if (workers == 1) {
    grow(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(grow, w);
  }
  return model;
}

std::vector<int> PredictClass(const ForestModel& model,
                              const CategoricalDataset& data) {
  const auto codes = PredictorCodes(model, data);
  const std::size_t f = model.predictors.size();
  std::vector<int> out(data.rows());
  std::vector<int> votes(static_cast<std::size_t>(model.classes));
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::fill(votes.begin(), votes.end(), 0);
    const std::span<const int> row(codes.data() + i * f, f);
    for (const auto& tree : model.trees) {
      const auto& dist = Leaf(tree, row).distribution;
      ++votes[static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin())];
    }
    out[i] = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin()) + 1;
  }
  return out;
}

std::vector<double> PredictClassShare(const ForestModel& model,
                                      const CategoricalDataset& data,
                                      int level) {
  if (level < 1 || level > model.classes) {
    throw ValidationError("forest: class level out of range");
  }
  const auto codes = PredictorCodes(model, data);
  const std::size_t f = model.predictors.size();
  std::vector<double> out(data.rows(), 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const std::span<const int> row(codes.data() + i * f, f);
    double s = 0.0;
    for (const auto& tree : model.trees) {
      s += Leaf(tree, row).distribution[static_cast<std::size_t>(level - 1)];
    }
    out[i] = s / static_cast<double>(model.trees.size());
  }
  return out;
}

}  // namespace synthcat
