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
#include "synthcat/random.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace synthcat {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master, StreamPhase phase,
                         std::uint64_t index) {
  std::uint64_t h = SplitMix64(master);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(phase));
  return SplitMix64(h ^ (index * 0xd6e8feb86659fd93ULL));
}

double Rng::Uniform() {
  // 53 random bits, offset by half an ulp so neither endpoint is reachable.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::UniformIndex(std::size_t n) {
  assert(n > 0);
  boost::random::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

double Rng::Normal() {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

double Rng::Gamma(double shape, double rate) {
  boost::random::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_) / rate;
}

double Rng::LogGamma(double shape) {
  if (shape >= 1.0) return std::log(Gamma(shape));
  // G(a) = G(a + 1) * U^(1/a), evaluated in log space.
  return std::log(Gamma(shape + 1.0)) + std::log(Uniform()) / shape;
}

double Rng::Beta(double a, double b) {
  const double la = LogGamma(a);
  const double lb = LogGamma(b);
  const double hi = std::max(la, lb);
  const double ea = std::exp(la - hi);
  const double eb = std::exp(lb - hi);
  return ea / (ea + eb);
}

void Rng::Dirichlet(std::span<const double> concentration,
                    std::span<double> out) {
  assert(concentration.size() == out.size());
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = LogGamma(concentration[i]);
    hi = std::max(hi, out[i]);
  }
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - hi);
    total += v;
  }
  for (double& v : out) v /= total;
}

std::size_t Rng::Categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = Uniform() * total;
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    if (target < running) return i;
  }
  // Rounding left target at the top edge; return the last positive entry.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

std::size_t Rng::CategoricalFromLog(std::span<const double> log_weights,
                                    std::vector<double>& scratch) {
  const double hi = *std::max_element(log_weights.begin(), log_weights.end());
  scratch.resize(log_weights.size());
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    scratch[i] = std::exp(log_weights[i] - hi);
  }
  return Categorical(scratch);
}

}  // namespace synthcat
