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
#ifndef SYNTHCAT_RANDOM_HPP_
#define SYNTHCAT_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace synthcat {

// Phases of a run that own an independent random stream. Every stream is
// derived from the single master seed, so e.g. replicate 3 draws the same
// numbers whether 3 or 30 replicates are requested.
enum class StreamPhase : std::uint64_t {
  kInit = 1,
  kSweep = 2,
  kReplicate = 3,
  kForest = 4,
  kSimulate = 5,
  kShuffle = 6,
  kMissing = 7,
  kPropensity = 8,
  kClassification = 9,
};

// SplitMix64 finalizer over (master, phase, index).
std::uint64_t DeriveSeed(std::uint64_t master, StreamPhase phase,
                         std::uint64_t index);

// Thin wrapper over a 64-bit Mersenne Twister with the handful of draws the
// samplers need. Distribution code is boost::random (header-defined, so
// streams are stable across standard libraries).
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, StreamPhase phase, std::uint64_t index)
      : engine_(DeriveSeed(master, phase, index)) {}

  Engine& engine() { return engine_; }

  // Uniform on the open interval (0, 1).
  double Uniform();
  // Integer uniform on [0, n).
  std::size_t UniformIndex(std::size_t n);
  double Normal();
  double Gamma(double shape, double rate = 1.0);
  // log of a Gamma(shape, 1) draw; stays finite for tiny shapes where the
  // draw itself underflows to zero.
  double LogGamma(double shape);
  double Beta(double a, double b);
  // Dirichlet draw written into `out` (same length as `concentration`).
  void Dirichlet(std::span<const double> concentration, std::span<double> out);
  // Index drawn with probability proportional to `weights` (non-negative).
  std::size_t Categorical(std::span<const double> weights);
  // Index drawn with probability proportional to exp(log_weights).
  std::size_t CategoricalFromLog(std::span<const double> log_weights,
                                 std::vector<double>& scratch);

 private:
  Engine engine_;
};

}  // namespace synthcat

#endif  // SYNTHCAT_RANDOM_HPP_
