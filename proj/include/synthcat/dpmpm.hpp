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
#ifndef SYNTHCAT_DPMPM_HPP_
#define SYNTHCAT_DPMPM_HPP_

// Truncated Dirichlet-process mixture of products of multinomials.
//
// Each record belongs to one of K latent classes; given its class, every
// variable is an independent multinomial draw from that class's kernel row.
// Class weights follow a stick-breaking prior truncated at K, with a Gamma
// prior on the concentration. The blocked Gibbs sampler cycles through
//
//   z_i      ~ p(k) proportional to w_k * prod_j theta[j](k, y_ij)
//   theta    ~ Dirichlet(a + per-class category counts)
//   V_k      ~ Beta(1 + n_k, alpha + sum_{l>k} n_l),   V_K = 1
//   alpha    ~ Gamma(a_alpha + K - 1, b_alpha - sum_{k<K} log(1 - V_k))
//
// and weights are recovered as w_k = V_k * prod_{l<k} (1 - V_l).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "synthcat/dataset.hpp"
#include "synthcat/random.hpp"

namespace synthcat {

struct DpmpmHyperparams {
  int classes = 80;  // truncation level K
  double a_alpha = 0.25;
  double b_alpha = 0.25;
  double dirichlet_a = 1.0;
  int nrun = 10000;
  int burn = 5000;
  int thin = 10;
  int replicates = 5;  // m
  std::uint64_t seed = 221;

  // Throws ValidationError.
  void Validate() const;
  // floor((nrun - burn) / thin)
  std::size_t RetainedCount() const;
};

// One state of the chain. Class indices are 0-based here and 1-based in
// serialized output.
struct DpmpmState {
  std::vector<int> assignments;          // z, length n
  Eigen::VectorXd sticks;                // V, length K, V_K = 1
  Eigen::VectorXd weights;               // pi, length K
  std::vector<Eigen::MatrixXd> kernels;  // theta, per variable K x d_j
  double alpha = 1.0;

  int classes() const { return static_cast<int>(weights.size()); }
  // Throws ComputationError when any invariant is violated beyond `tol`.
  void CheckInvariants(double tol = 1e-10) const;
};

// w_k = V_k * prod_{l<k}(1 - V_l)
Eigen::VectorXd StickBreakingWeights(const Eigen::VectorXd& sticks);

DpmpmState InitState(const CategoricalDataset& data,
                     const DpmpmHyperparams& hyper, Rng& rng);

// The four blocks of one sweep, exposed for testing.
void UpdateAssignments(DpmpmState& state, const CategoricalDataset& data,
                       Rng& rng);
// Returns per-class occupancy n_k.
std::vector<int> ClassCounts(const DpmpmState& state);
void UpdateKernels(DpmpmState& state, const CategoricalDataset& data,
                   const DpmpmHyperparams& hyper, Rng& rng);
void UpdateWeights(DpmpmState& state, const std::vector<int>& counts,
                   Rng& rng);
void UpdateConcentration(DpmpmState& state, const DpmpmHyperparams& hyper,
                         Rng& rng);

// One full sweep in the order z, theta, V/pi, alpha.
void GibbsSweep(DpmpmState& state, const CategoricalDataset& data,
                const DpmpmHyperparams& hyper, Rng& rng);

// log p(Y, z | pi, theta)
double CompleteLogLikelihood(const DpmpmState& state,
                             const CategoricalDataset& data);

struct PosteriorDraw {
  int sweep = 0;  // 1-based sweep index this snapshot was taken after
  Eigen::VectorXd weights;
  std::vector<Eigen::MatrixXd> kernels;
  double alpha = 1.0;
  int occupied = 0;
};

struct PosteriorDraws {
  DpmpmHyperparams hyper;
  Codebook codebook;
  std::vector<PosteriorDraw> draws;

  std::vector<int> OccupiedCounts() const;
};

// Called after every sweep with (sweep, nrun).
using ProgressHook = std::function<void(int, int)>;

// nrun sweeps from InitState; keeps every thin-th post-burn state. Sweep t
// uses the stream DeriveSeed(seed, kSweep, t).
PosteriorDraws RunChain(const CategoricalDataset& data,
                        const DpmpmHyperparams& hyper,
                        const ProgressHook& progress = {});

// How replicate l picks its latent class before its sensitive cells are
// redrawn.
enum class ClassRedraw {
  // z* ~ Multinomial(pi).
  kPrior,
  // z* ~ p(k | pi, theta, unsynthesized values of the record).
  kConditional,
};

// Redraws the listed sensitive columns of every record from `draw`; every
// other cell and every record id is copied unchanged. Throws
// ValidationError if `sensitive` is empty or names a variable the codebook
// does not flag as sensitive.
CategoricalDataset SynthesizePartial(const CategoricalDataset& data,
                                     const PosteriorDraw& draw,
                                     std::span<const std::size_t> sensitive,
                                     ClassRedraw redraw, Rng& rng);

enum class DrawSelection { kEvenlySpaced, kLastM };

// 0-based indices into the retained sequence. Evenly spaced picks
// floor(l * R / m) for l = 1..m (1-based positions).
std::vector<std::size_t> SelectDraws(std::size_t retained, int m,
                                     DrawSelection selection);

struct SynthesisOptions {
  DrawSelection selection = DrawSelection::kEvenlySpaced;
  ClassRedraw redraw = ClassRedraw::kConditional;
};

struct SyntheticReplicates {
  std::vector<CategoricalDataset> datasets;
  std::vector<std::size_t> draw_indices;  // 0-based into PosteriorDraws
  std::vector<std::size_t> sensitive;
  std::uint64_t seed = 0;
};

// Replicate l (0-based) uses the stream DeriveSeed(seed, kReplicate, l).
SyntheticReplicates GenerateReplicates(const CategoricalDataset& data,
                                       const PosteriorDraws& draws,
                                       std::span<const std::size_t> sensitive,
                                       const SynthesisOptions& options = {});
SyntheticReplicates GenerateReplicates(const CategoricalDataset& data,
                                       const DpmpmHyperparams& hyper,
                                       std::span<const std::size_t> sensitive,
                                       const SynthesisOptions& options = {});

}  // namespace synthcat

#endif  // SYNTHCAT_DPMPM_HPP_
