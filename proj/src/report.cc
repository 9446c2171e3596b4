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
#include "synthcat/report.hpp"

namespace synthcat {
namespace {

using nlohmann::json;

const char* CapModeName(CapUndefined mode) {
  return mode == CapUndefined::kZero ? "zero" : "exclude";
}

json RateJson(const std::optional<double>& rate) {
  return json{{"value", OptionalJson(rate)}, {"undefined", !rate.has_value()}};
}

json ErrorRowJson(const ClassErrorRow& r) {
  return json{{"level", r.level},
              {"support", r.support},
              {"error_synthetic_trained", OptionalJson(r.error_synthetic_trained)},
              {"error_confidential_trained",
               OptionalJson(r.error_confidential_trained)},
              {"absent_in_synthetic", r.absent_in_synthetic},
              {"absent_in_confidential", r.absent_in_confidential}};
}

}  // namespace

json OptionalJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json ToJson(const Interval& v) { return json::array({v.low, v.high}); }

json ToJson(const PmseResult& v) {
  return json{{"score", v.score},
              {"c", v.c},
              {"n_confidential", v.n_confidential},
              {"n_synthetic", v.n_synthetic},
              {"fit_flagged", v.fit_flagged}};
}

json ToJson(const CombinedEstimate& v) {
  return json{{"q_bar", v.q_bar},
              {"b_m", v.b_m},
              {"v_bar", v.v_bar},
              {"total_variance", v.total_variance},
              {"df", OptionalJson(v.df)},
              {"normal_quantile", !v.df.has_value()},
              {"ci", ToJson(v.ci)},
              {"level", v.level},
              {"m", v.m}};
}

json ToJson(const DeviationSummary& v, const Codebook&) {
  return json{{"order", v.order},
              {"tables", v.tables},
              {"cells", v.cells.size()},
              {"excluded_zero_cells", v.excluded_zero_cells},
              {"mean_absolute_deviation", v.mean_absolute_deviation},
              {"min_relative", OptionalJson(v.min_relative)},
              {"max_relative", OptionalJson(v.max_relative)},
              {"median_relative", OptionalJson(v.median_relative)}};
}

json ToJson(const ProportionUtility& v) {
  return json{{"variable", v.variable},
              {"level", v.level},
              {"confidential_estimate", v.confidential_estimate},
              {"confidential_ci", ToJson(v.confidential_ci)},
              {"synthetic", ToJson(v.synthetic)},
              {"overlap", OptionalJson(v.overlap)},
              {"overlap_undefined", !v.overlap.has_value()}};
}

json ToJson(const RegressionUtility& v) {
  json rows = json::array();
  for (const auto& r : v.rows) {
    rows.push_back(json{
        {"label", r.label},
        {"confidential_estimate", r.confidential_estimate},
        {"confidential_se", r.confidential_se},
        {"confidential_ci", ToJson(r.confidential_ci)},
        {"synthetic", r.synthetic ? ToJson(*r.synthetic) : json(nullptr)},
        {"overlap", OptionalJson(r.overlap)},
        {"overlap_undefined", !r.overlap.has_value()},
        {"confidential_converged", r.confidential_converged},
        {"replicates_converged", r.replicates_converged},
        {"missing_in_replicate", r.missing_in_replicate}});
  }
  return json{{"target", v.target},
              {"positive_level", v.positive_level},
              {"predictors", v.predictors},
              {"coefficients", rows}};
}

json ToJson(const UtilityReport& v, const Codebook& codebook) {
  json per = json::array();
  for (const auto& r : v.pmse.replicates) per.push_back(ToJson(r));
  json devs = json::array();
  for (const auto& d : v.deviations) {
    json per_rep = json::array();
    for (const auto& r : d.replicates) per_rep.push_back(ToJson(r, codebook));
    devs.push_back(json{{"order", d.order},
                        {"replicates", per_rep},
                        {"mean_absolute_deviation", d.mean_mad}});
  }
  json est = json::array();
  for (const auto& e : v.estimands) est.push_back(ToJson(e));
  json reg = json::array();
  for (const auto& r : v.regressions) reg.push_back(ToJson(r));
  return json{{"pmse", json{{"model", v.pmse_model},
                            {"replicates", per},
                            {"mean", v.pmse.mean}}},
              {"deviations", devs},
              {"estimands", est},
              {"regressions", reg}};
}

json ToJson(const MatchRiskSummary& v) {
  return json{{"expected_match_risk", v.expected_match_risk},
              {"true_match_rate", v.true_match_rate},
              {"false_match_rate", v.false_match_rate},
              {"false_rate_undefined", v.false_rate_undefined},
              {"unique_match_count", v.unique_match_count},
              {"targets", v.targets}};
}

json ToJson(const LinkageResult& v) {
  return json{{"links", v.links.size()},
              {"true_link_rate", RateJson(v.true_link_rate)},
              {"false_link_rate", RateJson(v.false_link_rate)},
              {"m_probs", v.m_probs},
              {"u_probs", v.u_probs},
              {"prevalence", v.prevalence},
              {"candidate_pairs", v.candidate_pairs},
              {"em_degenerate", v.em_degenerate}};
}

json ToJson(const CapResult& v) {
  return json{{"average", RateJson(v.average)},
              {"records", v.per_record.size()},
              {"undefined_count", v.undefined_count}};
}

json ToJson(const ClassificationRisk& v) {
  json rows = json::array();
  for (const auto& r : v.rows) rows.push_back(ErrorRowJson(r));
  return json{{"target", v.target},
              {"predictors", v.predictors},
              {"classes", rows},
              {"synthetic_model_constant", v.synthetic_model_constant},
              {"confidential_model_constant", v.confidential_model_constant}};
}

json ToJson(const RiskReport& v) {
  json out = json::object();
  out["known_vars"] = v.known_vars;
  out["linkage_keys"] = v.linkage_keys;
  if (v.match) {
    json per = json::array();
    for (const auto& r : v.match->replicates) per.push_back(ToJson(r));
    out["match"] = json{{"baseline", ToJson(v.match->baseline)},
                        {"replicates", per},
                        {"mean", json{{"expected_match_risk", v.match->mean_expected},
                                      {"true_match_rate", v.match->mean_true_rate},
                                      {"false_match_rate",
                                       RateJson(v.match->mean_false_rate)}}}};
  } else {
    out["match"] = nullptr;
  }
  if (v.linkage) {
    json per = json::array();
    for (const auto& r : v.linkage->replicates) per.push_back(ToJson(r));
    out["linkage"] = json{{"baseline", ToJson(v.linkage->baseline)},
                          {"replicates", per},
                          {"mean", json{{"true_link_rate",
                                         RateJson(v.linkage->mean_true_rate)},
                                        {"false_link_rate",
                                         RateJson(v.linkage->mean_false_rate)}}}};
  } else {
    out["linkage"] = nullptr;
  }
  if (v.cap) {
    json per = json::array();
    for (const auto& r : v.cap->replicates) per.push_back(ToJson(r));
    out["cap"] = json{{"target", v.cap->target},
                      {"keys", v.cap->keys},
                      {"undefined_mode", CapModeName(v.cap->mode)},
                      {"baseline", ToJson(v.cap->baseline)},
                      {"replicates", per},
                      {"mean_average", RateJson(v.cap->mean_average)}};
  } else {
    out["cap"] = nullptr;
  }
  if (v.classification) {
    json per = json::array();
    for (const auto& r : v.classification->replicates) per.push_back(ToJson(r));
    json mean = json::array();
    for (const auto& r : v.classification->mean) mean.push_back(ErrorRowJson(r));
    out["classification"] = json{{"replicates", per}, {"mean", mean}};
  } else {
    out["classification"] = nullptr;
  }
  return out;
}

std::string CanonicalDump(const json& j) {
  // nlohmann::json objects are std::map backed, so keys are already sorted.
  return j.dump(2) + "\n";
}

}  // namespace synthcat
