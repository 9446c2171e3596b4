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
#ifndef SYNTHCAT_REPORT_HPP_
#define SYNTHCAT_REPORT_HPP_

// Aggregate utility and risk reports and their JSON form. Keys are emitted in
// sorted order; undefined quantities are null with a companion flag, never
// NaN.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "synthcat/risk.hpp"
#include "synthcat/utility.hpp"

namespace synthcat {

struct DeviationOrder {
  int order = 0;
  std::vector<DeviationSummary> replicates;
  double mean_mad = 0.0;
};

struct UtilityReport {
  PmseSummary pmse;
  std::string pmse_model;
  std::vector<DeviationOrder> deviations;
  std::vector<ProportionUtility> estimands;
  std::vector<RegressionUtility> regressions;
};

struct MatchRiskSection {
  MatchRiskSummary baseline;
  std::vector<MatchRiskSummary> replicates;
  double mean_expected = 0.0;
  double mean_true_rate = 0.0;
  // Over replicates with a defined rate; empty when none has one.
  std::optional<double> mean_false_rate;
};

struct LinkageSection {
  LinkageResult baseline;
  std::vector<LinkageResult> replicates;
  std::optional<double> mean_true_rate;
  std::optional<double> mean_false_rate;
};

struct CapSection {
  std::string target;
  std::vector<std::string> keys;
  CapUndefined mode = CapUndefined::kExclude;
  CapResult baseline;
  std::vector<CapResult> replicates;
  std::optional<double> mean_average;
};

struct ClassificationSection {
  std::vector<ClassificationRisk> replicates;
  // Per class: mean over replicates of each error; empty when undefined.
  std::vector<ClassErrorRow> mean;
};

struct RiskReport {
  std::vector<std::string> known_vars;
  std::optional<MatchRiskSection> match;
  std::vector<std::string> linkage_keys;
  std::optional<LinkageSection> linkage;
  std::optional<CapSection> cap;
  std::optional<ClassificationSection> classification;
};

// Null for an empty optional.
nlohmann::json OptionalJson(const std::optional<double>& v);

nlohmann::json ToJson(const Interval& v);
nlohmann::json ToJson(const PmseResult& v);
nlohmann::json ToJson(const CombinedEstimate& v);
nlohmann::json ToJson(const DeviationSummary& v, const Codebook& codebook);
nlohmann::json ToJson(const ProportionUtility& v);
nlohmann::json ToJson(const RegressionUtility& v);
nlohmann::json ToJson(const UtilityReport& v, const Codebook& codebook);

nlohmann::json ToJson(const MatchRiskSummary& v);
nlohmann::json ToJson(const LinkageResult& v);
nlohmann::json ToJson(const CapResult& v);
nlohmann::json ToJson(const ClassificationRisk& v);
nlohmann::json ToJson(const RiskReport& v);

// Sorted keys, two-space indent, trailing newline.
std::string CanonicalDump(const nlohmann::json& j);

}  // namespace synthcat

#endif  // SYNTHCAT_REPORT_HPP_
