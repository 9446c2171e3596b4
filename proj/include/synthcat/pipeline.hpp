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
#ifndef SYNTHCAT_PIPELINE_HPP_
#define SYNTHCAT_PIPELINE_HPP_

// The config-driven commands behind the command-line tool. Every file they
// write carries the config hash and seed; nothing time- or host-dependent
// is recorded, so reruns are byte-identical.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthcat/config.hpp"
#include "synthcat/dataset.hpp"
#include "synthcat/report.hpp"

namespace synthcat {

// Progress and status lines; empty to stay silent.
using Logger = std::function<void(const std::string&)>;

inline constexpr char kRecordIdColumn[] = "record_id";

// Evaluation used by the utility command. The sensitive variables select the
// tables that are compared. Forest-based pMSE seeds derive from `seed`.
UtilityReport EvaluateUtility(const CategoricalDataset& confidential,
                              std::span<const CategoricalDataset> replicates,
                              const UtilitySpec& spec,
                              std::span<const std::size_t> sensitive,
                              std::uint64_t seed);

// Evaluation used by the risk command. Baselines pass the confidential data
// as the released data. Classification seeds derive from `seed`.
RiskReport EvaluateRisk(const CategoricalDataset& confidential,
                        std::span<const CategoricalDataset> replicates,
                        const RiskSpec& spec, std::uint64_t seed);

// Complete-case rows of the configured input.
CategoricalDataset LoadConfidential(const PipelineConfig& config);
// Throws ValidationError when a replicate file is missing.
std::vector<CategoricalDataset> LoadReplicates(const PipelineConfig& config);
std::filesystem::path ReplicatePath(const PipelineConfig& config, int l);

// Writes simulated.csv, codebook.json and ground_truth.json into out_dir.
void CmdSimulate(const std::filesystem::path& spec_path,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed, const Logger& log = {});
// Replicates, posterior draw snapshot and manifest.json.
void CmdSynthesize(const PipelineConfig& config, const Logger& log = {});
// utility_report.json and relative_diffs_t<t>.csv.
void CmdUtility(const PipelineConfig& config, const Logger& log = {});
// risk_report.json, cap_per_record.csv and linkage_pairs.csv.
void CmdRisk(const PipelineConfig& config, const Logger& log = {});
// report.json from the outputs of the other commands.
void CmdReport(const PipelineConfig& config, const Logger& log = {});

// Writes through a temporary sibling file and a rename.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace synthcat

#endif  // SYNTHCAT_PIPELINE_HPP_
