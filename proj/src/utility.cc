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
#include "synthcat/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "synthcat/error.hpp"
#include "synthcat/random.hpp"

namespace synthcat {
namespace {

void RequireSameCodebook(const CategoricalDataset& a,
                         const CategoricalDataset& b, const char* what) {
  if (a.codebook() != b.codebook()) {
    throw ValidationError(std::string(what) +
                          ": confidential and synthetic codebooks differ");
  }
}

// Mean that returns x exactly when every element equals x.
double StableMean(std::span<const double> xs) {
  const double base = xs.front();
  double s = 0.0;
  for (double x : xs) s += x - base;
  return base + s / static_cast<double>(xs.size());
}

double NormalQuantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

CategoricalDataset WithMembershipColumn(const CategoricalDataset& confidential,
                                        const CategoricalDataset& synthetic) {
  auto vars = confidential.codebook().variables();
  vars.push_back({"__synthetic__", {"0", "1"}, false});
  Codebook cb(std::move(vars));
  const std::size_t r = confidential.cols();
  std::vector<int> cells;
  std::vector<std::string> ids;
  cells.reserve((confidential.rows() + synthetic.rows()) * (r + 1));
  auto append = [&](const CategoricalDataset& d, int flag, const char* prefix) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
      auto row = d.row(i);
      cells.insert(cells.end(), row.begin(), row.end());
      cells.push_back(flag);
      ids.push_back(prefix + d.record_id(i));
    }
  };
  append(confidential, 1, "c:");
  append(synthetic, 2, "s:");
  return CategoricalDataset(std::move(cb), std::move(cells), std::move(ids));
}

}  // namespace

PmseResult Pmse(const CategoricalDataset& confidential,
                const CategoricalDataset& synthetic,
                const PmseOptions& options) {
  RequireSameCodebook(confidential, synthetic, "pmse");
  confidential.RequireComplete("pmse");
  synthetic.RequireComplete("pmse");
  PmseResult out;
  out.n_confidential = confidential.rows();
  out.n_synthetic = synthetic.rows();
  const std::size_t total = out.n_confidential + out.n_synthetic;
  out.c = static_cast<double>(out.n_synthetic) / static_cast<double>(total);

  std::vector<double> p_hat;
  std::vector<std::size_t> all(confidential.cols());
  std::iota(all.begin(), all.end(), 0);
  if (options.model == PropensityModel::kLogistic) {
    DesignMatrix design = StackRows(DummyEncode(confidential, all),
                                    DummyEncode(synthetic, all));
    PruneDegenerateColumns(design);
    std::vector<int> s(total, 0);
    std::fill(s.begin() + static_cast<std::ptrdiff_t>(out.n_confidential), s.end(), 1);
    const LogisticFit fit = FitLogistic(design, s, options.logistic);
    out.fit_flagged = !fit.converged;
    const Eigen::VectorXd p = PredictProba(fit, design);
    p_hat.assign(p.begin(), p.end());
  } else {
    const CategoricalDataset stacked = WithMembershipColumn(confidential, synthetic);
    const ForestModel model =
        FitForest(stacked, confidential.cols(), all, options.forest, options.seed);
    p_hat = PredictClassShare(model, stacked, 2);
  }
  double sum = 0.0;
  for (double p : p_hat) sum += (p - out.c) * (p - out.c);
  out.score = sum / static_cast<double>(total);
  return out;
}

PmseSummary PmseMean(const CategoricalDataset& confidential,
                     std::span<const CategoricalDataset> replicates,
                     const PmseOptions& options) {
  if (replicates.empty()) throw ValidationError("pmse: no replicates");
  PmseSummary out;
  std::vector<double> scores;
  for (std::size_t l = 0; l < replicates.size(); ++l) {
    PmseOptions opts = options;
    opts.seed = DeriveSeed(options.seed, StreamPhase::kPropensity, l);
    out.replicates.push_back(Pmse(confidential, replicates[l], opts));
    scores.push_back(out.replicates.back().score);
  }
  out.mean = StableMean(scores);
  return out;
}

std::vector<std::vector<std::size_t>> TableSubsets(
    std::size_t variables, std::size_t t, std::span<const std::size_t> focus,
    TableScope scope) {
  std::vector<std::size_t> all(variables);
  std::iota(all.begin(), all.end(), 0);
  auto subsets = Combinations(all, t);
  if (scope == TableScope::kAll || focus.empty()) return subsets;
  std::erase_if(subsets, [&](const std::vector<std::size_t>& s) {
    return std::none_of(s.begin(), s.end(), [&](std::size_t j) {
      return std::find(focus.begin(), focus.end(), j) != focus.end();
    });
  });
  return subsets;
}

DeviationSummary RelativeDifferences(const CategoricalDataset& confidential,
                                     const CategoricalDataset& synthetic, int t,
                                     std::span<const std::size_t> focus,
                                     TableScope scope) {
  RequireSameCodebook(confidential, synthetic, "relative_differences");
  if (t < 1 || static_cast<std::size_t>(t) > confidential.cols()) {
    throw ValidationError("relative_differences: order t must be in [1, r]");
  }
  DeviationSummary out;
  out.order = t;
  const auto subsets =
      TableSubsets(confidential.cols(), static_cast<std::size_t>(t), focus, scope);
  out.tables = subsets.size();
  double abs_sum = 0.0;
  std::vector<double> rel;
  for (const auto& vars : subsets) {
    const FrequencyTable c = CrossTabulate(confidential, vars);
    const FrequencyTable s = CrossTabulate(synthetic, vars);
    for (std::size_t cell = 0; cell < c.cell_count(); ++cell) {
      CellDeviation d;
      d.variables = vars;
      d.levels = c.CellLevels(cell);
      d.confidential = c.frequencies[cell];
      d.synthetic = s.frequencies[cell];
      abs_sum += std::abs(d.synthetic - d.confidential);
      if (d.confidential > 0.0) {
        d.relative = (d.synthetic - d.confidential) / d.confidential;
        rel.push_back(*d.relative);
      } else {
        ++out.excluded_zero_cells;
      }
      out.cells.push_back(std::move(d));
    }
  }
  if (!out.cells.empty()) {
    out.mean_absolute_deviation = abs_sum / static_cast<double>(out.cells.size());
  }
  if (!rel.empty()) {
    std::sort(rel.begin(), rel.end());
    out.min_relative = rel.front();
    out.max_relative = rel.back();
    const std::size_t h = rel.size() / 2;
    out.median_relative = rel.size() % 2 ? rel[h] : 0.5 * (rel[h - 1] + rel[h]);
  }
  return out;
}

double MeanAbsoluteDeviation(const CategoricalDataset& confidential,
                             const CategoricalDataset& synthetic, int t,
                             std::span<const std::size_t> focus,
                             TableScope scope) {
  return RelativeDifferences(confidential, synthetic, t, focus, scope)
      .mean_absolute_deviation;
}

CombinedEstimate CombineEstimates(std::span<const double> q,
                                  std::span<const double> v, double level) {
  if (q.size() != v.size()) {
    throw ValidationError("combine: estimate and variance counts differ");
  }
  if (q.size() < 2) throw ValidationError("combine: need m >= 2 replicates");
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError("combine: level must be in (0, 1)");
  }
  CombinedEstimate out;
  out.m = static_cast<int>(q.size());
  out.level = level;
  const double m = static_cast<double>(q.size());
  out.q_bar = StableMean(q);
  double ss = 0.0;
  for (double x : q) ss += (x - out.q_bar) * (x - out.q_bar);
  out.b_m = ss / (m - 1.0);
  out.v_bar = StableMean(v);
  out.total_variance = out.b_m / m + out.v_bar;
  const double p = 0.5 * (1.0 + level);
  double quantile;
  if (out.b_m > 0.0) {
    const double ratio = out.v_bar / (out.b_m / m);
    out.df = (m - 1.0) * (1.0 + ratio) * (1.0 + ratio);
    quantile = boost::math::quantile(boost::math::students_t_distribution<double>(*out.df), p);
  } else {
    quantile = NormalQuantile(p);
  }
  const double half = quantile * std::sqrt(out.total_variance);
  out.ci = {out.q_bar - half, out.q_bar + half};
  return out;
}

double IntervalOverlap(const Interval& confidential, const Interval& synthetic) {
  const double wc = confidential.high - confidential.low;
  const double ws = synthetic.high - synthetic.low;
  if (!(wc > 0.0) || !(ws > 0.0)) {
    throw ValidationError("interval_overlap: intervals need positive width");
  }
  const double lo = std::max(synthetic.low, confidential.low);
  const double hi = std::min(synthetic.high, confidential.high);
  const double inter = hi - lo;
  return inter / (2.0 * wc) + inter / (2.0 * ws);
}

Interval WaldInterval(double estimate, double variance, double level) {
  const double half = NormalQuantile(0.5 * (1.0 + level)) * std::sqrt(variance);
  return {estimate - half, estimate + half};
}

ProportionUtility ProportionUtilityFor(
    const CategoricalDataset& confidential,
    std::span<const CategoricalDataset> replicates, std::size_t variable,
    int level, double ci_level) {
  if (variable >= confidential.cols()) {
    throw ValidationError("proportion: unknown variable");
  }
  const auto& spec = confidential.codebook()[variable];
  if (level < 1 || level > spec.arity()) {
    throw ValidationError("proportion: level out of range for '" + spec.name + "'");
  }
  auto share = [&](const CategoricalDataset& d) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) hits += d.at(i, variable) == level;
    const double n = static_cast<double>(d.rows());
    const double p = static_cast<double>(hits) / n;
    return std::pair{p, p * (1.0 - p) / n};
  };
  ProportionUtility out;
  out.variable = spec.name;
  out.level = spec.levels[static_cast<std::size_t>(level - 1)];
  const auto [pc, vc] = share(confidential);
  out.confidential_estimate = pc;
  out.confidential_ci = WaldInterval(pc, vc, ci_level);
  std::vector<double> q, v;
  for (const auto& rep : replicates) {
    RequireSameCodebook(confidential, rep, "proportion");
    const auto [ps, vs] = share(rep);
    q.push_back(ps);
    v.push_back(vs);
  }
  out.synthetic = CombineEstimates(q, v, ci_level);
  const double wc = out.confidential_ci.high - out.confidential_ci.low;
  const double ws = out.synthetic.ci.high - out.synthetic.ci.low;
  if (wc > 0.0 && ws > 0.0) {
    out.overlap = IntervalOverlap(out.confidential_ci, out.synthetic.ci);
  }
  return out;
}

RegressionUtility RegressionUtilityFor(
    const CategoricalDataset& confidential,
    std::span<const CategoricalDataset> replicates, std::size_t target,
    int positive_level, std::span<const std::size_t> predictors,
    const LogisticOptions& options, double ci_level) {
  if (replicates.size() < 2) {
    throw ValidationError("regression utility: need m >= 2 replicates");
  }
  if (target >= confidential.cols()) {
    throw ValidationError("regression utility: unknown target");
  }
  const auto& cb = confidential.codebook();
  if (positive_level < 1 || positive_level > cb[target].arity()) {
    throw ValidationError("regression utility: positive level out of range");
  }
  for (std::size_t p : predictors) {
    if (p == target) {
      throw ValidationError("regression utility: target listed as a predictor");
    }
  }
  auto response = [&](const CategoricalDataset& d) {
    std::vector<int> y(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) y[i] = d.at(i, target) == positive_level;
    return y;
  };

  RegressionUtility out;
  out.target = cb[target].name;
  out.positive_level = cb.LabelOf(target, positive_level);
  out.predictors = cb.NamesOf(predictors);

  const DesignMatrix conf_design = BuildDesign(confidential, predictors);
  const LogisticFit conf_fit = FitLogistic(conf_design, response(confidential), options);
  const Eigen::VectorXd conf_se = conf_fit.StandardErrors();

  struct RepFit {
    bool ok = false;
    LogisticFit fit;
  };
  std::vector<RepFit> fits;
  for (const auto& rep : replicates) {
    RequireSameCodebook(confidential, rep, "regression utility");
    RepFit rf;
    try {
      rf.fit = FitLogistic(BuildDesign(rep, predictors), response(rep), options);
      rf.ok = true;
    } catch (const ValidationError&) {
      // Single-class response in this replicate; every row gets flagged.
    }
    fits.push_back(std::move(rf));
  }

  for (std::size_t c = 0; c < conf_fit.labels.size(); ++c) {
    CoefficientRow row;
    row.label = conf_fit.labels[c];
    row.confidential_estimate = conf_fit.coefficients[static_cast<Eigen::Index>(c)];
    row.confidential_se = conf_se[static_cast<Eigen::Index>(c)];
    row.confidential_ci = WaldInterval(row.confidential_estimate,
                                       row.confidential_se * row.confidential_se,
                                       ci_level);
    row.confidential_converged = conf_fit.converged;
    std::vector<double> q, v;
    for (const auto& rf : fits) {
      if (!rf.ok) {
        row.replicates_converged = false;
        row.missing_in_replicate = true;
        continue;
      }
      auto it = std::find(rf.fit.labels.begin(), rf.fit.labels.end(), row.label);
      if (it == rf.fit.labels.end()) {
        row.missing_in_replicate = true;
        continue;
      }
      const auto k = it - rf.fit.labels.begin();
      q.push_back(rf.fit.coefficients[k]);
      v.push_back(rf.fit.covariance(k, k));
      if (!rf.fit.converged) row.replicates_converged = false;
    }
    if (!row.missing_in_replicate) {
      row.synthetic = CombineEstimates(q, v, ci_level);
      const double wc = row.confidential_ci.high - row.confidential_ci.low;
      const double ws = row.synthetic->ci.high - row.synthetic->ci.low;
      if (row.confidential_converged && row.replicates_converged && wc > 0.0 &&
          ws > 0.0) {
        row.overlap = IntervalOverlap(row.confidential_ci, row.synthetic->ci);
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace synthcat
