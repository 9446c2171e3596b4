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
#ifndef SYNTHCAT_CONFIG_HPP_
#define SYNTHCAT_CONFIG_HPP_

// Pipeline configuration: a single JSON document. Relative paths resolve
// against the directory of the config file. The key layout is documented in
// README.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "synthcat/csv.hpp"
#include "synthcat/dataset.hpp"
#include "synthcat/dpmpm.hpp"
#include "synthcat/risk.hpp"
#include "synthcat/snapshot.hpp"
#include "synthcat/utility.hpp"

namespace synthcat {

struct EstimandSpec {
  std::string variable;
  std::string level;
};

struct RegressionSpec {
  std::string target;
  std::string positive_level;
  std::vector<std::string> predictors;
};

struct UtilitySpec {
  PropensityModel pmse_model = PropensityModel::kLogistic;
  ForestParams pmse_forest;
  std::vector<int> table_orders = {1, 2, 3};
  TableScope table_scope = TableScope::kTouchingFocus;
  std::vector<EstimandSpec> estimands;
  std::vector<RegressionSpec> regressions;
};

struct CapSpec {
  std::vector<std::string> keys;
  std::string target;
  CapUndefined undefined = CapUndefined::kExclude;
};

struct ClassificationSpec {
  std::string target;
  std::vector<std::string> predictors;
  ForestParams forest;
};

struct RiskSpec {
  std::vector<std::string> known_vars;
  std::vector<std::string> linkage_keys;
  std::vector<std::string> linkage_blocking;
  double linkage_threshold = 0.0;
  std::optional<CapSpec> cap;
  std::optional<ClassificationSpec> classification;
};

struct PipelineConfig {
  std::filesystem::path input;
  CsvOptions csv;
  Codebook codebook;
  std::filesystem::path output_dir;
  DpmpmHyperparams sampler;
  DrawSelection draw_selection = DrawSelection::kEvenlySpaced;
  SnapshotFormat snapshot_format = SnapshotFormat::kJson;
  std::vector<std::string> sensitive_vars;
  ClassRedraw z_mode = ClassRedraw::kConditional;
  bool reuse_draws = false;
  UtilitySpec utility;
  RiskSpec risk;

  // The parsed document after overrides, used for hashing.
  nlohmann::json document;

  // Throws ValidationError naming the offending key.
  void Validate() const;
  // 16 hex digits of FNV-1a over the canonical document without output_dir.
  std::string Hash() const;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

// Throws ValidationError with the offending key path in the message.
PipelineConfig ParseConfig(nlohmann::json document,
                           const std::filesystem::path& base_dir,
                           const ConfigOverrides& overrides = {});
PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const ConfigOverrides& overrides = {});

nlohmann::json ReadJsonFile(const std::filesystem::path& path);

// FNV-1a, 64 bit.
std::uint64_t Fnv1a64(std::string_view bytes);
std::string HashHex(std::uint64_t h);

}  // namespace synthcat

#endif  // SYNTHCAT_CONFIG_HPP_
