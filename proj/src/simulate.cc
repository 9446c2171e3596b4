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
#include "synthcat/simulate.hpp"

#include <cmath>
#include <string>

#include "synthcat/error.hpp"
#include "synthcat/random.hpp"
#include "synthcat/snapshot.hpp"

namespace synthcat {
namespace {

constexpr double kSumTol = 1e-9;

bool IsDistribution(const double* p, std::size_t len) {
  double total = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    if (!(p[i] >= 0.0)) return false;
    total += p[i];
  }
  return std::abs(total - 1.0) <= kSumTol;
}

}  // namespace

void SimSpec::Validate() const {
  if (n == 0) throw ValidationError("simulation: n must be >= 1");
  if (class_weights.empty()) throw ValidationError("simulation: no classes");
  if (!IsDistribution(class_weights.data(), class_weights.size())) {
    throw ValidationError("simulation: class_weights must sum to 1");
  }
  if (kernels.size() != codebook.size()) {
    throw ValidationError("simulation: one kernel table per variable required");
  }
  for (std::size_t j = 0; j < kernels.size(); ++j) {
    const auto& theta = kernels[j];
    if (theta.rows() != static_cast<Eigen::Index>(classes()) ||
        theta.cols() != codebook[j].arity()) {
      throw ValidationError("simulation: kernel for '" + codebook[j].name +
                            "' must be classes x levels");
    }
    for (Eigen::Index k = 0; k < theta.rows(); ++k) {
      Eigen::RowVectorXd row = theta.row(k);
      if (!IsDistribution(row.data(), static_cast<std::size_t>(row.size()))) {
        throw ValidationError("simulation: kernel row " + std::to_string(k + 1) +
                              " of '" + codebook[j].name +
                              "' must sum to 1");
      }
    }
  }
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
    throw ValidationError("simulation: missing_rate must be in [0, 1)");
  }
}

Simulation Simulate(const SimSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed, StreamPhase::kSimulate, 0);
  const std::size_t r = spec.codebook.size();
  std::vector<int> cells(spec.n * r);
  std::vector<int> z(spec.n);
  std::vector<double> row;
  for (std::size_t i = 0; i < spec.n; ++i) {
    z[i] = static_cast<int>(rng.Categorical(spec.class_weights));
    for (std::size_t j = 0; j < r; ++j) {
      const auto& theta = spec.kernels[j];
      row.assign(static_cast<std::size_t>(theta.cols()), 0.0);
      for (Eigen::Index l = 0; l < theta.cols(); ++l) {
        row[static_cast<std::size_t>(l)] = theta(z[i], l);
      }
      cells[i * r + j] = static_cast<int>(rng.Categorical(row)) + 1;
    }
  }
  if (spec.missing_rate > 0.0) {
    Rng miss(spec.seed, StreamPhase::kMissing, 0);
    for (int& c : cells) {
      if (miss.Uniform() < spec.missing_rate) c = kMissing;
    }
  }
  return {CategoricalDataset(spec.codebook, std::move(cells)), std::move(z)};
}

SimSpec SimSpecFromJson(const nlohmann::json& j) {
  SimSpec spec;
  try {
    spec.n = j.at("n").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.missing_rate = j.value("missing_rate", 0.0);
    spec.class_weights = j.at("class_weights").get<std::vector<double>>();
    spec.codebook = CodebookFromJson(j.at("variables"));
    for (const auto& v : j.at("variables")) {
      const auto rows = v.at("kernels").get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd theta(static_cast<Eigen::Index>(rows.size()),
                            rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != static_cast<std::size_t>(theta.cols())) {
          throw ValidationError("simulation: ragged kernel table for '" +
                                v.at("name").get<std::string>() + "'");
        }
        for (std::size_t l = 0; l < rows[k].size(); ++l) {
          theta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = rows[k][l];
        }
      }
      spec.kernels.push_back(std::move(theta));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("simulation spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

nlohmann::json SimSpecToJson(const SimSpec& spec) {
  nlohmann::json vars = CodebookToJson(spec.codebook);
  for (std::size_t j = 0; j < spec.kernels.size(); ++j) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index k = 0; k < spec.kernels[j].rows(); ++k) {
      rows.push_back(std::vector<double>(spec.kernels[j].row(k).begin(),
                                         spec.kernels[j].row(k).end()));
    }
    vars[j]["kernels"] = std::move(rows);
  }
  return {{"n", spec.n},
          {"seed", spec.seed},
          {"missing_rate", spec.missing_rate},
          {"class_weights", spec.class_weights},
          {"variables", std::move(vars)}};
}

nlohmann::json GroundTruthJson(const SimSpec& spec, const Simulation& sim) {
  nlohmann::json j = SimSpecToJson(spec);
  std::vector<int> z(sim.classes.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = sim.classes[i] + 1;
  j["z"] = std::move(z);
  return j;
}

}  // namespace synthcat
