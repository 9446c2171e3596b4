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
#ifndef SYNTHCAT_SIMULATE_HPP_
#define SYNTHCAT_SIMULATE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "synthcat/dataset.hpp"

namespace synthcat {

// Ground-truth latent class model for generating test data.
struct SimSpec {
  Codebook codebook;
  std::vector<double> class_weights;     // true pi
  std::vector<Eigen::MatrixXd> kernels;  // per variable, classes x d_j
  std::size_t n = 0;
  std::uint64_t seed = 0;
  // Share of cells blanked after generation, to exercise listwise deletion.
  double missing_rate = 0.0;

  std::size_t classes() const { return class_weights.size(); }
  // Throws ValidationError.
  void Validate() const;
};

struct Simulation {
  CategoricalDataset data;
  std::vector<int> classes;  // 0-based true class per row
};

// Draws z_i from the class weights, then each cell from its class kernel.
Simulation Simulate(const SimSpec& spec);

// JSON form:
//   { "n", "seed", "missing_rate"?, "class_weights": [..],
//     "variables": [ { "name", "levels", "sensitive",
//                      "kernels": [[d_j probabilities] per class] } ] }
SimSpec SimSpecFromJson(const nlohmann::json& j);
nlohmann::json SimSpecToJson(const SimSpec& spec);
nlohmann::json GroundTruthJson(const SimSpec& spec, const Simulation& sim);

}  // namespace synthcat

#endif  // SYNTHCAT_SIMULATE_HPP_
