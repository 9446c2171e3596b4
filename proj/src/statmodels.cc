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
#include <limits>

#include <Eigen/Cholesky>

#include "synthcat/error.hpp"

namespace synthcat {
namespace {

constexpr double kProbClamp = 1e-12;
constexpr char kIntercept[] = "(Intercept)";

double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double LogLikelihood(const Eigen::VectorXd& eta, std::span<const int> y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += y[static_cast<std::size_t>(i)] * eta[i] - Softplus(eta[i]);
  }
  return ll;
}

Eigen::MatrixXd WeightedGram(const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& w) {
  return x.transpose() * w.asDiagonal() * x;
}

// Inverse of a symmetric PSD matrix; a small ridge rescues singular input.
Eigen::MatrixXd SymmetricInverse(const Eigen::MatrixXd& h) {
  const Eigen::Index p = h.rows();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
      (ldlt.vectorD().array() > 1e-14 * std::max(1.0, h.diagonal().maxCoeff()))
          .all()) {
    return ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  }
  const double ridge = 1e-8 * std::max(1.0, h.trace() / static_cast<double>(p));
  Eigen::MatrixXd reg = h;
  reg.diagonal().array() += ridge;
  return Eigen::LDLT<Eigen::MatrixXd>(reg).solve(Eigen::MatrixXd::Identity(p, p));
}

}  // namespace

DesignMatrix DummyEncode(const CategoricalDataset& data,
                         std::span<const std::size_t> variables) {
  data.RequireComplete("design matrix");
  const auto& cb = data.codebook();
  DesignMatrix d;
  d.labels.push_back(kIntercept);
  std::vector<Eigen::Index> offset;
  for (std::size_t j : variables) {
    offset.push_back(static_cast<Eigen::Index>(d.labels.size()));
    for (int l = 2; l <= cb[j].arity(); ++l) {
      d.labels.push_back(cb[j].name + "=" + cb.LabelOf(j, l));
    }
  }
  const auto n = static_cast<Eigen::Index>(data.rows());
  d.x = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(d.labels.size()));
  d.x.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t v = 0; v < variables.size(); ++v) {
      const int level = data.at(static_cast<std::size_t>(i), variables[v]);
      if (level >= 2) d.x(i, offset[v] + level - 2) = 1.0;
    }
  }
  return d;
}

DesignMatrix StackRows(const DesignMatrix& top, const DesignMatrix& bottom) {
  if (top.labels != bottom.labels) {
    throw ValidationError("stack: design matrices have different columns");
  }
  DesignMatrix out;
  out.labels = top.labels;
  out.x.resize(top.x.rows() + bottom.x.rows(), top.x.cols());
  out.x << top.x, bottom.x;
  return out;
}

void PruneDegenerateColumns(DesignMatrix& design) {
  const Eigen::Index p = design.x.cols();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < p; ++c) {
    const auto col = design.x.col(c);
    const bool constant = (col.array() == col[0]).all();
    if (c == 0 || !constant) {
      keep.push_back(c);
    } else {
      design.pruned.push_back(design.labels[static_cast<std::size_t>(c)]);
    }
  }
  // Greedy rank screen on the Gram matrix via Schur complements.
  const Eigen::MatrixXd gram = design.x.transpose() * design.x;
  std::vector<Eigen::Index> independent;
  for (Eigen::Index c : keep) {
    bool ok = gram(c, c) > 0.0;
    if (ok && !independent.empty()) {
      const auto s = static_cast<Eigen::Index>(independent.size());
      Eigen::MatrixXd g(s, s);
      Eigen::VectorXd v(s);
      for (Eigen::Index a = 0; a < s; ++a) {
        v[a] = gram(independent[static_cast<std::size_t>(a)], c);
        for (Eigen::Index b = 0; b < s; ++b) {
          g(a, b) = gram(independent[static_cast<std::size_t>(a)],
                         independent[static_cast<std::size_t>(b)]);
        }
      }
      const Eigen::VectorXd coef = g.ldlt().solve(v);
      const double resid = gram(c, c) - v.dot(coef);
      ok = resid > 1e-9 * gram(c, c);
    }
    if (ok) {
      independent.push_back(c);
    } else {
      design.pruned.push_back(design.labels[static_cast<std::size_t>(c)]);
    }
  }
  if (independent.size() == static_cast<std::size_t>(p)) return;
  Eigen::MatrixXd x(design.x.rows(), static_cast<Eigen::Index>(independent.size()));
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < independent.size(); ++k) {
    x.col(static_cast<Eigen::Index>(k)) = design.x.col(independent[k]);
    labels.push_back(design.labels[static_cast<std::size_t>(independent[k])]);
  }
  design.x = std::move(x);
  design.labels = std::move(labels);
}

DesignMatrix BuildDesign(const CategoricalDataset& data,
                         std::span<const std::size_t> variables) {
  DesignMatrix d = DummyEncode(data, variables);
  PruneDegenerateColumns(d);
  return d;
}

DesignMatrix AlignColumns(const DesignMatrix& design,
                          const std::vector<std::string>& labels) {
  DesignMatrix out;
  out.labels = labels;
  out.x = Eigen::MatrixXd::Zero(design.x.rows(),
                                static_cast<Eigen::Index>(labels.size()));
  for (std::size_t k = 0; k < labels.size(); ++k) {
    auto it = std::find(design.labels.begin(), design.labels.end(), labels[k]);
    if (it != design.labels.end()) {
      out.x.col(static_cast<Eigen::Index>(k)) =
          design.x.col(it - design.labels.begin());
    }
  }
  return out;
}

Eigen::VectorXd LogisticFit::StandardErrors() const {
  return covariance.diagonal().array().max(0.0).sqrt().matrix();
}

LogisticFit FitLogistic(const DesignMatrix& design, std::span<const int> y,
                        const LogisticOptions& options) {
  const Eigen::MatrixXd& x = design.x;
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (static_cast<std::size_t>(n) != y.size() || n == 0) {
    throw ValidationError("logistic: design rows and response length differ");
  }
  std::size_t ones = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw ValidationError("logistic: response must be 0/1");
    ones += static_cast<std::size_t>(v);
  }
  if (ones == 0 || ones == y.size()) {
    throw ValidationError("logistic: response has a single class");
  }
  Eigen::VectorXd yv(n);
  for (Eigen::Index i = 0; i < n; ++i) yv[i] = y[static_cast<std::size_t>(i)];

  LogisticFit fit;
  fit.labels = design.labels;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = x * beta;
  double ll = LogLikelihood(eta, y);
  fit.log_likelihood_trace.push_back(ll);

  Eigen::VectorXd prob(n), w(n);
  for (int it = 0; it < options.max_iter; ++it) {
    for (Eigen::Index i = 0; i < n; ++i) {
      prob[i] = Sigmoid(eta[i]);
      w[i] = prob[i] * (1.0 - prob[i]);
    }
    const Eigen::VectorXd score = x.transpose() * (yv - prob);
    if (score.norm() / static_cast<double>(n) < options.tol) {
      fit.converged = true;
      break;
    }
    Eigen::MatrixXd info = WeightedGram(x, w);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    Eigen::VectorXd delta = ldlt.solve(score);
    if (ldlt.info() != Eigen::Success || !delta.allFinite()) {
      info.diagonal().array() += 1e-8 * std::max(1.0, info.trace() / static_cast<double>(p));
      delta = info.ldlt().solve(score);
    }
    double step = 1.0;
    double gain = 0.0;
    bool accepted = false;
    for (int h = 0; h < 50; ++h, step *= 0.5) {
      const Eigen::VectorXd cand = beta + step * delta;
      const Eigen::VectorXd cand_eta = x * cand;
      const double cand_ll = LogLikelihood(cand_eta, y);
      if (cand_ll >= ll) {
        gain = cand_ll - ll;
        beta = cand;
        eta = cand_eta;
        ll = cand_ll;
        accepted = true;
        break;
      }
    }
    fit.iterations = it + 1;
    if (!accepted) {
      // No ascent direction left at double precision.
      fit.converged = score.norm() / static_cast<double>(n) < std::sqrt(options.tol);
      break;
    }
    fit.log_likelihood_trace.push_back(ll);
    // The gradient can stall just above tol from rounding in X'(y - p).
    if (gain <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(ll) &&
        score.norm() / static_cast<double>(n) < std::sqrt(options.tol)) {
      fit.converged = true;
      break;
    }
    if (beta.cwiseAbs().maxCoeff() > options.coef_cap) {
      fit.separated = true;
      beta = beta.cwiseMax(-options.coef_cap).cwiseMin(options.coef_cap);
      eta = x * beta;
      ll = LogLikelihood(eta, y);
      break;
    }
  }
  if (!fit.separated && !fit.converged && ll > -1e-6) fit.separated = true;
  if (fit.separated) fit.converged = false;

  for (Eigen::Index i = 0; i < n; ++i) {
    prob[i] = Sigmoid(eta[i]);
    w[i] = prob[i] * (1.0 - prob[i]);
  }
  fit.coefficients = beta;
  fit.log_likelihood = ll;
  fit.covariance = SymmetricInverse(WeightedGram(x, w));
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
  return fit;
}

Eigen::VectorXd PredictProba(const LogisticFit& fit,
                             const DesignMatrix& design) {
  if (design.labels != fit.labels) {
    throw ValidationError("predict: design columns do not match the fit");
  }
  const Eigen::VectorXd eta = design.x * fit.coefficients;
  Eigen::VectorXd p(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    p[i] = std::clamp(Sigmoid(eta[i]), kProbClamp, 1.0 - kProbClamp);
  }
  return p;
}

}  // namespace synthcat
