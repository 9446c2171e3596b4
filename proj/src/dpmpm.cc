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
#include "synthcat/dpmpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "synthcat/error.hpp"

namespace synthcat {
namespace {

// Smallest probability whose log is taken; keeps log-kernels finite.
constexpr double kProbFloor = 1e-300;
constexpr double kStickCeiling = 1.0 - 1e-12;

std::vector<Eigen::MatrixXd> LogKernels(const DpmpmState& state) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(state.kernels.size());
  for (const auto& k : state.kernels) {
    out.push_back(k.array().max(kProbFloor).log().matrix());
  }
  return out;
}

Eigen::VectorXd LogWeights(const Eigen::VectorXd& weights) {
  Eigen::VectorXd out(weights.size());
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    out[k] = weights[k] > 0.0 ? std::log(weights[k])
                              : -std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

void DpmpmHyperparams::Validate() const {
  if (classes < 1) throw ValidationError("sampler.K must be >= 1");
  if (!(a_alpha > 0.0) || !(b_alpha > 0.0)) {
    throw ValidationError("sampler.a_alpha and sampler.b_alpha must be > 0");
  }
  if (!(dirichlet_a > 0.0)) {
    throw ValidationError("sampler.dirichlet_a must be > 0");
  }
  if (burn < 0 || nrun < 1 || burn >= nrun) {
    throw ValidationError("sampler: need 0 <= burn < nrun");
  }
  if (thin < 1) throw ValidationError("sampler.thin must be >= 1");
  if (replicates < 1) throw ValidationError("sampler.m must be >= 1");
}

std::size_t DpmpmHyperparams::RetainedCount() const {
  return static_cast<std::size_t>((nrun - burn) / thin);
}

void DpmpmState::CheckInvariants(double tol) const {
  const int k = classes();
  if (k < 1 || sticks.size() != k) {
    throw ComputationError("dpmpm state: sticks/weights size mismatch");
  }
  if (std::abs(weights.sum() - 1.0) > tol) {
    throw ComputationError("dpmpm state: weights do not sum to 1");
  }
  if ((weights.array() < 0.0).any()) {
    throw ComputationError("dpmpm state: negative weight");
  }
  if (sticks[k - 1] != 1.0) {
    throw ComputationError("dpmpm state: last stick must equal 1");
  }
  for (const auto& theta : kernels) {
    if (theta.rows() != k) {
      throw ComputationError("dpmpm state: kernel has wrong class count");
    }
    for (Eigen::Index c = 0; c < theta.rows(); ++c) {
      if (std::abs(theta.row(c).sum() - 1.0) > tol ||
          (theta.row(c).array() < 0.0).any()) {
        throw ComputationError("dpmpm state: kernel row is not a distribution");
      }
    }
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ComputationError("dpmpm state: alpha must be positive");
  }
  for (int z : assignments) {
    if (z < 0 || z >= k) {
      throw ComputationError("dpmpm state: assignment out of range");
    }
  }
}

Eigen::VectorXd StickBreakingWeights(const Eigen::VectorXd& sticks) {
  Eigen::VectorXd w(sticks.size());
  double remaining = 1.0;
  for (Eigen::Index k = 0; k < sticks.size(); ++k) {
    w[k] = sticks[k] * remaining;
    remaining *= 1.0 - sticks[k];
  }
  return w;
}

DpmpmState InitState(const CategoricalDataset& data,
                     const DpmpmHyperparams& hyper, Rng& rng) {
  data.RequireComplete("dpmpm");
  hyper.Validate();
  const int k = hyper.classes;
  DpmpmState state;
  state.alpha = hyper.a_alpha / hyper.b_alpha;
  state.assignments.resize(data.rows());
  for (auto& z : state.assignments) {
    z = static_cast<int>(rng.UniformIndex(static_cast<std::size_t>(k)));
  }
  state.sticks.resize(k);
  for (int c = 0; c + 1 < k; ++c) state.sticks[c] = rng.Beta(1.0, state.alpha);
  state.sticks[k - 1] = 1.0;
  state.weights = StickBreakingWeights(state.sticks);
  state.kernels.reserve(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const int d = data.codebook()[j].arity();
    Eigen::MatrixXd theta(k, d);
    std::vector<double> conc(static_cast<std::size_t>(d), hyper.dirichlet_a);
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int c = 0; c < k; ++c) {
      rng.Dirichlet(conc, row);
      for (int l = 0; l < d; ++l) theta(c, l) = row[static_cast<std::size_t>(l)];
    }
    state.kernels.push_back(std::move(theta));
  }
  return state;
}

void UpdateAssignments(DpmpmState& state, const CategoricalDataset& data,
                       Rng& rng) {
  const auto log_kernels = LogKernels(state);
  const Eigen::VectorXd log_w = LogWeights(state.weights);
  const std::size_t r = data.cols();
  Eigen::VectorXd lw(state.classes());
  std::vector<double> scratch;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    lw = log_w;
    for (std::size_t j = 0; j < r; ++j) lw += log_kernels[j].col(data.at(i, j) - 1);
    state.assignments[i] = static_cast<int>(rng.CategoricalFromLog(
        std::span<const double>(lw.data(), static_cast<std::size_t>(lw.size())),
        scratch));
  }
}

std::vector<int> ClassCounts(const DpmpmState& state) {
  std::vector<int> counts(static_cast<std::size_t>(state.classes()), 0);
  for (int z : state.assignments) ++counts[static_cast<std::size_t>(z)];
  return counts;
}

void UpdateKernels(DpmpmState& state, const CategoricalDataset& data,
                   const DpmpmHyperparams& hyper, Rng& rng) {
  const int k = state.classes();
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const int d = data.codebook()[j].arity();
    Eigen::MatrixXd counts = Eigen::MatrixXd::Constant(k, d, hyper.dirichlet_a);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      counts(state.assignments[i], data.at(i, j) - 1) += 1.0;
    }
    std::vector<double> conc(static_cast<std::size_t>(d));
    std::vector<double> row(static_cast<std::size_t>(d));
    auto& theta = state.kernels[j];
    for (int c = 0; c < k; ++c) {
      for (int l = 0; l < d; ++l) conc[static_cast<std::size_t>(l)] = counts(c, l);
      rng.Dirichlet(conc, row);
      for (int l = 0; l < d; ++l) theta(c, l) = row[static_cast<std::size_t>(l)];
    }
  }
}

void UpdateWeights(DpmpmState& state, const std::vector<int>& counts,
                   Rng& rng) {
  const int k = state.classes();
  long tail = 0;
  for (int c : counts) tail += c;
  for (int c = 0; c + 1 < k; ++c) {
    tail -= counts[static_cast<std::size_t>(c)];
    state.sticks[c] = rng.Beta(1.0 + counts[static_cast<std::size_t>(c)],
                               state.alpha + static_cast<double>(tail));
  }
  state.sticks[k - 1] = 1.0;
  state.weights = StickBreakingWeights(state.sticks);
}

void UpdateConcentration(DpmpmState& state, const DpmpmHyperparams& hyper,
                         Rng& rng) {
  const int k = state.classes();
  double log_remaining = 0.0;
  for (int c = 0; c + 1 < k; ++c) {
    log_remaining += std::log1p(-std::min(state.sticks[c], kStickCeiling));
  }
  const double shape = hyper.a_alpha + k - 1;
  const double rate = hyper.b_alpha - log_remaining;
  state.alpha =
      std::max(rng.Gamma(shape, rate), std::numeric_limits<double>::min());
}

void GibbsSweep(DpmpmState& state, const CategoricalDataset& data,
                const DpmpmHyperparams& hyper, Rng& rng) {
  UpdateAssignments(state, data, rng);
  UpdateKernels(state, data, hyper, rng);
  UpdateWeights(state, ClassCounts(state), rng);
  UpdateConcentration(state, hyper, rng);
}

double CompleteLogLikelihood(const DpmpmState& state,
                             const CategoricalDataset& data) {
  double ll = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const int z = state.assignments[i];
    ll += std::log(state.weights[z]);
    for (std::size_t j = 0; j < data.cols(); ++j) {
      ll += std::log(state.kernels[j](z, data.at(i, j) - 1));
    }
  }
  return ll;
}

std::vector<int> PosteriorDraws::OccupiedCounts() const {
  std::vector<int> out;
  out.reserve(draws.size());
  for (const auto& d : draws) out.push_back(d.occupied);
  return out;
}

PosteriorDraws RunChain(const CategoricalDataset& data,
                        const DpmpmHyperparams& hyper,
                        const ProgressHook& progress) {
  hyper.Validate();
  PosteriorDraws out;
  out.hyper = hyper;
  out.codebook = data.codebook();
  out.draws.reserve(hyper.RetainedCount());

  Rng init_rng(hyper.seed, StreamPhase::kInit, 0);
  DpmpmState state = InitState(data, hyper, init_rng);
  for (int t = 1; t <= hyper.nrun; ++t) {
    Rng rng(hyper.seed, StreamPhase::kSweep, static_cast<std::uint64_t>(t));
    GibbsSweep(state, data, hyper, rng);
    if (t > hyper.burn && (t - hyper.burn) % hyper.thin == 0) {
      const auto counts = ClassCounts(state);
      PosteriorDraw draw;
      draw.sweep = t;
      draw.weights = state.weights;
      draw.kernels = state.kernels;
      draw.alpha = state.alpha;
      draw.occupied = static_cast<int>(
          std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }));
      out.draws.push_back(std::move(draw));
    }
    if (progress) progress(t, hyper.nrun);
  }
  return out;
}

CategoricalDataset SynthesizePartial(const CategoricalDataset& data,
                                     const PosteriorDraw& draw,
                                     std::span<const std::size_t> sensitive,
                                     ClassRedraw redraw, Rng& rng) {
  if (sensitive.empty()) {
    throw ValidationError("synthesize: no sensitive variables to synthesize");
  }
  const auto& cb = data.codebook();
  std::vector<bool> synthesized(data.cols(), false);
  for (std::size_t j : sensitive) {
    if (j >= data.cols() || !cb[j].sensitive) {
      throw ValidationError(
          "synthesize: variable '" +
          (j < data.cols() ? cb[j].name : std::to_string(j)) +
          "' is not flagged sensitive in the codebook");
    }
    synthesized[j] = true;
  }
  if (draw.kernels.size() != data.cols()) {
    throw ValidationError("synthesize: draw does not match the codebook");
  }
  data.RequireComplete("synthesize");

  const Eigen::Index k = draw.weights.size();
  std::vector<Eigen::MatrixXd> log_kernels;
  if (redraw == ClassRedraw::kConditional) {
    for (const auto& theta : draw.kernels) {
      log_kernels.push_back(theta.array().max(kProbFloor).log().matrix());
    }
  }
  const Eigen::VectorXd log_w = LogWeights(draw.weights);
  const std::span<const double> weights(draw.weights.data(),
                                        static_cast<std::size_t>(k));

  std::vector<int> cells = data.cells();
  const std::size_t r = data.cols();
  Eigen::VectorXd lw(k);
  std::vector<double> scratch;
  std::vector<double> row;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::size_t z;
    if (redraw == ClassRedraw::kPrior) {
      z = rng.Categorical(weights);
    } else {
      lw = log_w;
      for (std::size_t j = 0; j < r; ++j) {
        if (!synthesized[j]) lw += log_kernels[j].col(data.at(i, j) - 1);
      }
      z = rng.CategoricalFromLog(
          std::span<const double>(lw.data(), static_cast<std::size_t>(k)),
          scratch);
    }
    for (std::size_t j : sensitive) {
      const auto& theta = draw.kernels[j];
      row.resize(static_cast<std::size_t>(theta.cols()));
      for (Eigen::Index l = 0; l < theta.cols(); ++l) {
        row[static_cast<std::size_t>(l)] = theta(static_cast<Eigen::Index>(z), l);
      }
      cells[i * r + j] = static_cast<int>(rng.Categorical(row)) + 1;
    }
  }
  return data.WithCells(std::move(cells));
}

std::vector<std::size_t> SelectDraws(std::size_t retained, int m,
                                     DrawSelection selection) {
  if (m < 1) throw ValidationError("synthesize: m must be >= 1");
  const auto mm = static_cast<std::size_t>(m);
  if (mm > retained) {
    throw ValidationError("synthesize: m = " + std::to_string(m) +
                          " exceeds the " + std::to_string(retained) +
                          " retained posterior draws; lower m or lengthen "
                          "the chain (nrun - burn) / thin");
  }
  std::vector<std::size_t> out(mm);
  for (std::size_t l = 1; l <= mm; ++l) {
    out[l - 1] = selection == DrawSelection::kEvenlySpaced
                     ? l * retained / mm - 1
                     : retained - mm + l - 1;
  }
  return out;
}

SyntheticReplicates GenerateReplicates(const CategoricalDataset& data,
                                       const PosteriorDraws& draws,
                                       std::span<const std::size_t> sensitive,
                                       const SynthesisOptions& options) {
  SyntheticReplicates out;
  out.seed = draws.hyper.seed;
  out.sensitive.assign(sensitive.begin(), sensitive.end());
  out.draw_indices = SelectDraws(draws.draws.size(), draws.hyper.replicates,
                                 options.selection);
  for (std::size_t l = 0; l < out.draw_indices.size(); ++l) {
    Rng rng(draws.hyper.seed, StreamPhase::kReplicate, l);
    out.datasets.push_back(SynthesizePartial(
        data, draws.draws[out.draw_indices[l]], sensitive, options.redraw, rng));
  }
  return out;
}

SyntheticReplicates GenerateReplicates(const CategoricalDataset& data,
                                       const DpmpmHyperparams& hyper,
                                       std::span<const std::size_t> sensitive,
                                       const SynthesisOptions& options) {
  hyper.Validate();
  // Fail before the chain runs.
  SelectDraws(hyper.RetainedCount(), hyper.replicates, options.selection);
  if (sensitive.empty()) {
    throw ValidationError("synthesize: no sensitive variables to synthesize");
  }
  return GenerateReplicates(data, RunChain(data, hyper), sensitive, options);
}

}  // namespace synthcat
