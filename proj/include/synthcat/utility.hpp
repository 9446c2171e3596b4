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
#ifndef SYNTHCAT_UTILITY_HPP_
#define SYNTHCAT_UTILITY_HPP_

// Utility of synthetic replicates relative to the confidential data: the
// propensity-score mean squared error, cell-level deviations of t-way
// tables, combining rules for m partially synthetic replicates, and
// confidence-interval overlap.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/statmodels.hpp"

namespace synthcat {

enum class PropensityModel { kLogistic, kForest };

struct PmseOptions {
  PropensityModel model = PropensityModel::kLogistic;
  LogisticOptions logistic;
  ForestParams forest;
  std::uint64_t seed = 0;  // forest only
};

struct PmseResult {
  double score = 0.0;
  double c = 0.0;  // n_s / (n_c + n_s)
  std::size_t n_confidential = 0;
  std::size_t n_synthetic = 0;
  // Logistic only: the fit did not converge, probabilities were clamped.
  bool fit_flagged = false;
};

// Stacks confidential (S = 0) and synthetic (S = 1) rows, predicts S from
// main effects of every variable, and averages (p_hat - c)^2.
PmseResult Pmse(const CategoricalDataset& confidential,
                const CategoricalDataset& synthetic,
                const PmseOptions& options = {});

struct PmseSummary {
  std::vector<PmseResult> replicates;
  double mean = 0.0;
};

// Replicate l fits its forest from DeriveSeed(options.seed, kPropensity, l).
PmseSummary PmseMean(const CategoricalDataset& confidential,
                     std::span<const CategoricalDataset> replicates,
                     const PmseOptions& options = {});

// Which t-way tables are compared. Tables made only of unsynthesized
// variables are identical by construction, so by default they are skipped.
enum class TableScope { kTouchingFocus, kAll };

// Variable subsets of size t: all of them, or those with at least one
// member of `focus`. An empty focus means all subsets.
std::vector<std::vector<std::size_t>> TableSubsets(
    std::size_t variables, std::size_t t, std::span<const std::size_t> focus,
    TableScope scope);

struct CellDeviation {
  std::vector<std::size_t> variables;
  std::vector<int> levels;
  double confidential = 0.0;
  double synthetic = 0.0;
  // (s - c) / c; empty when c == 0.
  std::optional<double> relative;
};

struct DeviationSummary {
  int order = 0;
  std::size_t tables = 0;
  std::vector<CellDeviation> cells;
  std::size_t excluded_zero_cells = 0;  // cells with c == 0
  double mean_absolute_deviation = 0.0;  // over every cell, c == 0 included
  std::optional<double> min_relative;
  std::optional<double> max_relative;
  std::optional<double> median_relative;
};

DeviationSummary RelativeDifferences(
    const CategoricalDataset& confidential, const CategoricalDataset& synthetic,
    int t, std::span<const std::size_t> focus = {},
    TableScope scope = TableScope::kTouchingFocus);

double MeanAbsoluteDeviation(const CategoricalDataset& confidential,
                             const CategoricalDataset& synthetic, int t,
                             std::span<const std::size_t> focus = {},
                             TableScope scope = TableScope::kTouchingFocus);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct CombinedEstimate {
  double q_bar = 0.0;
  double b_m = 0.0;  // between-replicate variance
  double v_bar = 0.0;  // mean within-replicate variance
  double total_variance = 0.0;  // T_p = b_m / m + v_bar
  // t degrees of freedom; empty when b_m == 0 and a normal quantile is used.
  std::optional<double> df;
  Interval ci;
  double level = 0.95;
  int m = 0;
};

// Combining rules for partially synthetic data. Throws ValidationError for
// m < 2 or length mismatch.
CombinedEstimate CombineEstimates(std::span<const double> q,
                                  std::span<const double> v,
                                  double level = 0.95);

// I = (U_i - L_i) / (2 (U_c - L_c)) + (U_i - L_i) / (2 (U_s - L_s)), with
// L_i, U_i the intersection bounds. Negative for disjoint intervals.
// Throws ValidationError for an interval of non-positive width.
double IntervalOverlap(const Interval& confidential, const Interval& synthetic);

// Normal-approximation interval for a single estimate.
Interval WaldInterval(double estimate, double variance, double level = 0.95);

struct ProportionUtility {
  std::string variable;
  std::string level;
  double confidential_estimate = 0.0;
  Interval confidential_ci;
  CombinedEstimate synthetic;
  // Empty when either interval has zero width (p_hat of 0 or 1).
  std::optional<double> overlap;
};

// Share of rows at `level`; per-replicate variance p(1 - p) / n.
ProportionUtility ProportionUtilityFor(
    const CategoricalDataset& confidential,
    std::span<const CategoricalDataset> replicates, std::size_t variable,
    int level, double ci_level = 0.95);

struct CoefficientRow {
  std::string label;
  double confidential_estimate = 0.0;
  double confidential_se = 0.0;
  Interval confidential_ci;
  std::optional<CombinedEstimate> synthetic;
  std::optional<double> overlap;
  bool confidential_converged = true;
  bool replicates_converged = true;
  // The column was pruned or absent in at least one replicate fit.
  bool missing_in_replicate = false;
};

struct RegressionUtility {
  std::string target;
  std::string positive_level;
  std::vector<std::string> predictors;
  std::vector<CoefficientRow> rows;
};

// Logistic regression of [target == positive_level] on the predictors, fitted
// on the confidential data and every replicate; replicate coefficients are
// combined with CombineEstimates using the fit variances.
RegressionUtility RegressionUtilityFor(
    const CategoricalDataset& confidential,
    std::span<const CategoricalDataset> replicates, std::size_t target,
    int positive_level, std::span<const std::size_t> predictors,
    const LogisticOptions& options = {}, double ci_level = 0.95);

}  // namespace synthcat

#endif  // SYNTHCAT_UTILITY_HPP_
