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
#ifndef SYNTHCAT_RISK_HPP_
#define SYNTHCAT_RISK_HPP_

// Disclosure risk of a released replicate against the confidential data.
//
// Identification: exact-agreement matching on intruder-known variables
// (expected match risk, true and false match rates) and Fellegi-Sunter
// record linkage with EM-estimated weights and greedy one-to-one links.
// Attribute: correct attribution probability and a forest classifier
// trained on released data and scored on confidential data.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/statmodels.hpp"

namespace synthcat {

struct MatchTrace {
  std::size_t candidates = 0;  // c_i
  bool true_among = false;     // T_i
  bool true_unique = false;    // K_i
  bool false_unique = false;   // F_i
};

struct MatchRiskSummary {
  double expected_match_risk = 0.0;  // sum T_i / c_i, c_i = 0 terms add 0
  double true_match_rate = 0.0;      // sum K_i / N
  double false_match_rate = 0.0;     // sum F_i / s; 0 when s = 0
  bool false_rate_undefined = false; // s = 0
  std::size_t unique_match_count = 0;  // s
  std::size_t targets = 0;             // N
  std::vector<MatchTrace> records;     // per target, when requested
};

// Candidates for confidential record i are the synthetic records that agree
// with it on every known variable; the true match is the synthetic record
// with the same record id. `targets` lists confidential rows to evaluate
// (all rows when empty).
MatchRiskSummary MatchRisk(const CategoricalDataset& confidential,
                           const CategoricalDataset& synthetic,
                           std::span<const std::size_t> known_vars,
                           std::span<const std::size_t> targets = {},
                           bool keep_trace = false);

// Counts of binary agreement patterns; bit h of the index is agreement on
// key h.
struct AgreementPatterns {
  int keys = 0;
  std::vector<std::uint64_t> counts;  // size 2^keys

  std::uint64_t total() const;
  // Throws ValidationError on ragged or non-binary input.
  static AgreementPatterns FromPairs(
      const std::vector<std::vector<int>>& per_pair_agreement);
};

struct FsEmOptions {
  std::vector<double> init_m;  // per key; default 0.8 each
  std::vector<double> init_u;  // per key; default 0.2 each
  double init_prevalence = 0.1;
  double tol = 1e-10;  // relative log-likelihood change
  int max_iter = 5000;
};

struct FsEmResult {
  std::vector<double> m;
  std::vector<double> u;
  double prevalence = 0.0;
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  bool converged = false;
  // Only one distinct pattern was observed; estimates are clamped.
  bool degenerate = false;
};

// Two-class conditional-independence mixture fitted by EM on pattern
// counts. Probabilities are kept in [1e-6, 1 - 1e-6]; the class with the
// higher mean agreement is reported as the match class.
FsEmResult EmFellegiSunter(const AgreementPatterns& patterns,
                           const FsEmOptions& options = {});

// log2 likelihood ratio of an agreement pattern.
double LinkageWeight(std::uint32_t pattern, std::span<const double> m,
                     std::span<const double> u);

struct LinkageOptions {
  double threshold = 0.0;  // links need weight strictly above this
  // Candidate pairs must agree on these; empty means the full cross product.
  std::vector<std::size_t> blocking;
  // Full cross products beyond this many rows on either side are refused.
  std::size_t max_full_cross_rows = 10000;
  FsEmOptions em;
};

struct Link {
  std::string confidential_id;
  std::string synthetic_id;
  double weight = 0.0;
  bool true_link = false;
};

struct LinkageResult {
  std::vector<Link> links;
  // Empty when no pair cleared the threshold.
  std::optional<double> true_link_rate;
  std::optional<double> false_link_rate;
  std::vector<double> m_probs;
  std::vector<double> u_probs;
  double prevalence = 0.0;
  std::uint64_t candidate_pairs = 0;
  bool em_degenerate = false;
};

// Links are assigned greedily by descending weight; equal weights are taken
// in (confidential id, synthetic id) lexicographic order.
LinkageResult RecordLinkageRisk(const CategoricalDataset& confidential,
                                const CategoricalDataset& synthetic,
                                std::span<const std::size_t> keys,
                                const LinkageOptions& options = {});

enum class CapUndefined {
  kExclude,  // records with no key match leave the average
  kZero,     // ... or count as CAP 0
};

struct CapResult {
  // Per confidential record; empty when no synthetic record shares its keys
  // (and the mode is kExclude).
  std::vector<std::optional<double>> per_record;
  std::optional<double> average;
  std::size_t undefined_count = 0;
};

// Share of key-matching synthetic records that also match the record's
// target value.
CapResult Cap(const CategoricalDataset& confidential,
              const CategoricalDataset& synthetic,
              std::span<const std::size_t> keys, std::size_t target,
              CapUndefined mode = CapUndefined::kExclude);

struct ClassErrorRow {
  std::string level;
  std::size_t support = 0;  // confidential rows of this class
  // 1 - recall on the confidential data; empty when support is 0.
  std::optional<double> error_synthetic_trained;
  std::optional<double> error_confidential_trained;
  bool absent_in_synthetic = false;     // class missing from training data
  bool absent_in_confidential = false;
};

struct ClassificationRisk {
  std::string target;
  std::vector<std::string> predictors;
  std::vector<ClassErrorRow> rows;
  bool synthetic_model_constant = false;
  bool confidential_model_constant = false;
};

// Model A is trained on the synthetic data, model B on the confidential
// data; both are scored on the confidential data.
ClassificationRisk ClassificationRiskFor(
    const CategoricalDataset& confidential, const CategoricalDataset& synthetic,
    std::size_t target, std::span<const std::size_t> predictors,
    const ForestParams& params, std::uint64_t seed);

}  // namespace synthcat

#endif  // SYNTHCAT_RISK_HPP_
