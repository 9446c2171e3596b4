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
#ifndef SYNTHCAT_TESTS_TEST_UTIL_HPP_
#define SYNTHCAT_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "synthcat/dataset.hpp"

namespace synthcat::testing {

// Variables V0.. with the given arities; the flagged ones are sensitive.
inline Codebook MakeCodebook(const std::vector<int>& arities,
                             const std::vector<bool>& sensitive = {}) {
  std::vector<VariableSpec> vars;
  for (std::size_t j = 0; j < arities.size(); ++j) {
    VariableSpec v;
    v.name = "V" + std::to_string(j);
    for (int l = 1; l <= arities[j]; ++l) v.levels.push_back(std::to_string(l));
    v.sensitive = j < sensitive.size() && sensitive[j];
    vars.push_back(std::move(v));
  }
  return Codebook(std::move(vars));
}

// Uniform random codes; ids "1".."n".
inline CategoricalDataset RandomDataset(const Codebook& cb, std::size_t n,
                                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<int> cells;
  cells.reserve(n * cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      cells.push_back(1 + static_cast<int>(gen() % static_cast<std::uint64_t>(cb[j].arity())));
    }
  }
  return CategoricalDataset(cb, std::move(cells));
}

}  // namespace synthcat::testing

#endif  // SYNTHCAT_TESTS_TEST_UTIL_HPP_
