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
#include "synthcat/risk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "synthcat/error.hpp"
#include "synthcat/random.hpp"

namespace synthcat {
namespace {

constexpr double kProbFloor = 1e-6;
constexpr int kMaxLinkageKeys = 20;

double ClampProb(double p) {
  return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

void RequireSameCodebook(const CategoricalDataset& a,
                         const CategoricalDataset& b, const char* what) {
  if (!(a.codebook() == b.codebook())) {
    throw ValidationError(std::string(what) +
                          ": confidential and synthetic codebooks differ");
  }
}

void RequireIndices(std::span<const std::size_t> idx, std::size_t cols,
                    const char* what) {
  for (std::size_t j : idx) {
    if (j >= cols) {
      throw ValidationError(std::string(what) + ": variable index out of range");
    }
  }
}

// Key tuple of a row packed into a string; values are small positive ints.
std::string KeyOf(const CategoricalDataset& data, std::size_t i,
                  std::span<const std::size_t> vars) {
  std::string key;
  key.reserve(vars.size() * 2);
  for (std::size_t j : vars) {
    const int v = data.at(i, j);
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  return key;
}

std::vector<std::size_t> OrderById(const CategoricalDataset& data) {
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.record_id(a) < data.record_id(b);
  });
  return order;
}

double LogBernoulliPattern(std::uint32_t pattern, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t h = 0; h < p.size(); ++h) {
    s += (pattern >> h) & 1u ? std::log(p[h]) : std::log1p(-p[h]);
  }
  return s;
}

double LogSumExp(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

}  // namespace

MatchRiskSummary MatchRisk(const CategoricalDataset& confidential,
                           const CategoricalDataset& synthetic,
                           std::span<const std::size_t> known_vars,
                           std::span<const std::size_t> targets,
                           bool keep_trace) {
  RequireSameCodebook(confidential, synthetic, "match risk");
  RequireIndices(known_vars, confidential.cols(), "match risk");
  confidential.RequireComplete("match risk");
  synthetic.RequireComplete("match risk");

  std::unordered_map<std::string, std::size_t> bucket_size;
  for (std::size_t r = 0; r < synthetic.rows(); ++r) {
    ++bucket_size[KeyOf(synthetic, r, known_vars)];
  }
  std::unordered_map<std::string, std::size_t> syn_by_id;
  for (std::size_t r = 0; r < synthetic.rows(); ++r) {
    syn_by_id.emplace(synthetic.record_id(r), r);
  }

  std::vector<std::size_t> rows;
  if (targets.empty()) {
    rows.resize(confidential.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    rows.assign(targets.begin(), targets.end());
    for (std::size_t i : rows) {
      if (i >= confidential.rows()) {
        throw ValidationError("match risk: target row out of range");
      }
    }
  }

  MatchRiskSummary out;
  out.targets = rows.size();
  if (keep_trace) out.records.reserve(rows.size());
  std::size_t true_unique = 0;
  std::size_t false_unique = 0;
  for (std::size_t i : rows) {
    const std::string key = KeyOf(confidential, i, known_vars);
    MatchTrace t;
    if (auto it = bucket_size.find(key); it != bucket_size.end()) {
      t.candidates = it->second;
    }
    if (auto it = syn_by_id.find(confidential.record_id(i));
        it != syn_by_id.end()) {
      t.true_among = KeyOf(synthetic, it->second, known_vars) == key;
    }
    t.true_unique = t.candidates == 1 && t.true_among;
    t.false_unique = t.candidates == 1 && !t.true_among;
    if (t.candidates > 0 && t.true_among) {
      out.expected_match_risk += 1.0 / static_cast<double>(t.candidates);
    }
    true_unique += t.true_unique ? 1 : 0;
    false_unique += t.false_unique ? 1 : 0;
    if (keep_trace) out.records.push_back(t);
  }
  out.unique_match_count = true_unique + false_unique;
  out.true_match_rate = rows.empty() ? 0.0
                                     : static_cast<double>(true_unique) /
                                           static_cast<double>(rows.size());
  if (out.unique_match_count == 0) {
    out.false_rate_undefined = true;
  } else {
    out.false_match_rate = static_cast<double>(false_unique) /
                           static_cast<double>(out.unique_match_count);
  }
  return out;
}

std::uint64_t AgreementPatterns::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

AgreementPatterns AgreementPatterns::FromPairs(
    const std::vector<std::vector<int>>& per_pair_agreement) {
  if (per_pair_agreement.empty()) {
    throw ValidationError("agreement patterns: no pairs");
  }
  AgreementPatterns p;
  p.keys = static_cast<int>(per_pair_agreement.front().size());
  if (p.keys < 1 || p.keys > kMaxLinkageKeys) {
    throw ValidationError("agreement patterns: need between 1 and 20 keys");
  }
  p.counts.assign(std::size_t{1} << p.keys, 0);
  for (const auto& pair : per_pair_agreement) {
    if (static_cast<int>(pair.size()) != p.keys) {
      throw ValidationError("agreement patterns: pairs have different lengths");
    }
    std::uint32_t mask = 0;
    for (int h = 0; h < p.keys; ++h) {
      const int a = pair[static_cast<std::size_t>(h)];
      if (a != 0 && a != 1) {
        throw ValidationError("agreement patterns: entries must be 0 or 1");
      }
      mask |= static_cast<std::uint32_t>(a) << h;
    }
    ++p.counts[mask];
  }
  return p;
}

FsEmResult EmFellegiSunter(const AgreementPatterns& patterns,
                           const FsEmOptions& options) {
  const auto k = static_cast<std::size_t>(patterns.keys);
  if (k == 0 || patterns.counts.size() != (std::size_t{1} << k)) {
    throw ValidationError("EM: pattern table size does not match key count");
  }
  const double total = static_cast<double>(patterns.total());
  if (total <= 0.0) throw ValidationError("EM: no candidate pairs");

  FsEmResult r;
  r.m = options.init_m.empty() ? std::vector<double>(k, 0.8) : options.init_m;
  r.u = options.init_u.empty() ? std::vector<double>(k, 0.2) : options.init_u;
  if (r.m.size() != k || r.u.size() != k) {
    throw ValidationError("EM: initial m/u length does not match key count");
  }
  for (std::size_t h = 0; h < k; ++h) {
    r.m[h] = ClampProb(r.m[h]);
    r.u[h] = ClampProb(r.u[h]);
  }
  r.prevalence = ClampProb(options.init_prevalence);

  std::size_t distinct = 0;
  for (auto c : patterns.counts) distinct += c > 0 ? 1 : 0;
  r.degenerate = distinct <= 1;

  const std::size_t g_count = patterns.counts.size();
  std::vector<double> w(g_count, 0.0);
  auto e_step = [&]() {
    const double lp = std::log(r.prevalence);
    const double lq = std::log1p(-r.prevalence);
    double ll = 0.0;
    for (std::size_t g = 0; g < g_count; ++g) {
      const auto pat = static_cast<std::uint32_t>(g);
      const double a = lp + LogBernoulliPattern(pat, r.m);
      const double b = lq + LogBernoulliPattern(pat, r.u);
      const double lse = LogSumExp(a, b);
      w[g] = std::exp(a - lse);
      if (patterns.counts[g] > 0) {
        ll += static_cast<double>(patterns.counts[g]) * lse;
      }
    }
    return ll;
  };

  double ll = e_step();
  r.log_likelihood_trace.push_back(ll);
  for (int it = 0; it < options.max_iter; ++it) {
    double sum_w = 0.0;
    std::vector<double> agree_m(k, 0.0), agree_u(k, 0.0);
    for (std::size_t g = 0; g < g_count; ++g) {
      const double n = static_cast<double>(patterns.counts[g]);
      if (n == 0.0) continue;
      sum_w += n * w[g];
      for (std::size_t h = 0; h < k; ++h) {
        if ((g >> h) & 1u) {
          agree_m[h] += n * w[g];
          agree_u[h] += n * (1.0 - w[g]);
        }
      }
    }
    const double sum_u = total - sum_w;
    for (std::size_t h = 0; h < k; ++h) {
      r.m[h] = ClampProb(sum_w > 0.0 ? agree_m[h] / sum_w : r.m[h]);
      r.u[h] = ClampProb(sum_u > 0.0 ? agree_u[h] / sum_u : r.u[h]);
    }
    r.prevalence = ClampProb(sum_w / total);
    const double next = e_step();
    r.log_likelihood_trace.push_back(next);
    r.iterations = it + 1;
    const bool small = std::abs(next - ll) <= options.tol * (std::abs(ll) + 1.0);
    ll = next;
    if (small) {
      r.converged = true;
      break;
    }
  }

  const double mean_m = std::accumulate(r.m.begin(), r.m.end(), 0.0);
  const double mean_u = std::accumulate(r.u.begin(), r.u.end(), 0.0);
  if (mean_m < mean_u) {
    std::swap(r.m, r.u);
    r.prevalence = 1.0 - r.prevalence;
  }
  return r;
}

double LinkageWeight(std::uint32_t pattern, std::span<const double> m,
                     std::span<const double> u) {
  double s = 0.0;
  for (std::size_t h = 0; h < m.size(); ++h) {
    s += (pattern >> h) & 1u ? std::log2(m[h] / u[h])
                             : std::log2((1.0 - m[h]) / (1.0 - u[h]));
  }
  return s;
}

LinkageResult RecordLinkageRisk(const CategoricalDataset& confidential,
                                const CategoricalDataset& synthetic,
                                std::span<const std::size_t> keys,
                                const LinkageOptions& options) {
  RequireSameCodebook(confidential, synthetic, "record linkage");
  RequireIndices(keys, confidential.cols(), "record linkage");
  RequireIndices(options.blocking, confidential.cols(), "record linkage");
  if (keys.empty() || keys.size() > static_cast<std::size_t>(kMaxLinkageKeys)) {
    throw ValidationError("record linkage: need between 1 and 20 linkage keys");
  }
  confidential.RequireComplete("record linkage");
  synthetic.RequireComplete("record linkage");
  if (options.blocking.empty() &&
      std::max(confidential.rows(), synthetic.rows()) >
          options.max_full_cross_rows) {
    throw ValidationError(
        "record linkage: " + std::to_string(confidential.rows()) + " x " +
        std::to_string(synthetic.rows()) +
        " rows is too large for a full cross product; set blocking variables");
  }

  const auto conf_order = OrderById(confidential);
  const auto syn_order = OrderById(synthetic);

  // Blocks in id order on both sides.
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
      blocks;
  for (std::size_t i : conf_order) {
    blocks[KeyOf(confidential, i, options.blocking)].first.push_back(i);
  }
  for (std::size_t j : syn_order) {
    auto it = blocks.find(KeyOf(synthetic, j, options.blocking));
    if (it != blocks.end()) it->second.second.push_back(j);
  }

  auto pattern_of = [&](std::size_t i, std::size_t j) {
    std::uint32_t mask = 0;
    for (std::size_t h = 0; h < keys.size(); ++h) {
      if (confidential.at(i, keys[h]) == synthetic.at(j, keys[h])) {
        mask |= 1u << h;
      }
    }
    return mask;
  };

  AgreementPatterns patterns;
  patterns.keys = static_cast<int>(keys.size());
  patterns.counts.assign(std::size_t{1} << keys.size(), 0);
  for (const auto& [key, block] : blocks) {
    for (std::size_t i : block.first) {
      for (std::size_t j : block.second) ++patterns.counts[pattern_of(i, j)];
    }
  }

  LinkageResult out;
  out.candidate_pairs = patterns.total();
  if (out.candidate_pairs == 0) return out;

  const FsEmResult em = EmFellegiSunter(patterns, options.em);
  out.m_probs = em.m;
  out.u_probs = em.u;
  out.prevalence = em.prevalence;
  out.em_degenerate = em.degenerate;

  // Patterns grouped by weight, highest first.
  std::map<double, std::vector<std::uint32_t>, std::greater<>> groups;
  for (std::size_t g = 0; g < patterns.counts.size(); ++g) {
    if (patterns.counts[g] == 0) continue;
    const auto pat = static_cast<std::uint32_t>(g);
    const double wgt = LinkageWeight(pat, em.m, em.u);
    if (wgt > options.threshold) groups[wgt].push_back(pat);
  }

  std::vector<char> conf_linked(confidential.rows(), 0);
  std::vector<char> syn_linked(synthetic.rows(), 0);
  std::vector<char> in_group(patterns.counts.size(), 0);
  // Ordering within a weight group: confidential id, then synthetic id.
  std::vector<std::pair<std::size_t, const std::vector<std::size_t>*>> conf_rows;
  for (const auto& [key, block] : blocks) {
    for (std::size_t i : block.first) conf_rows.emplace_back(i, &block.second);
  }
  std::stable_sort(conf_rows.begin(), conf_rows.end(),
                   [&](const auto& a, const auto& b) {
                     return confidential.record_id(a.first) <
                            confidential.record_id(b.first);
                   });

  for (const auto& [wgt, pats] : groups) {
    std::fill(in_group.begin(), in_group.end(), 0);
    for (auto p : pats) in_group[p] = 1;
    for (const auto& [i, syn_rows] : conf_rows) {
      if (conf_linked[i]) continue;
      for (std::size_t j : *syn_rows) {
        if (syn_linked[j] || !in_group[pattern_of(i, j)]) continue;
        conf_linked[i] = 1;
        syn_linked[j] = 1;
        Link link;
        link.confidential_id = confidential.record_id(i);
        link.synthetic_id = synthetic.record_id(j);
        link.weight = wgt;
        link.true_link = link.confidential_id == link.synthetic_id;
        out.links.push_back(std::move(link));
        break;
      }
    }
  }

  if (!out.links.empty()) {
    const auto true_links = std::count_if(
        out.links.begin(), out.links.end(), [](const Link& l) { return l.true_link; });
    const double rate = static_cast<double>(true_links) /
                        static_cast<double>(out.links.size());
    out.true_link_rate = rate;
    out.false_link_rate = 1.0 - rate;
  }
  return out;
}

CapResult Cap(const CategoricalDataset& confidential,
              const CategoricalDataset& synthetic,
              std::span<const std::size_t> keys, std::size_t target,
              CapUndefined mode) {
  RequireSameCodebook(confidential, synthetic, "CAP");
  RequireIndices(keys, confidential.cols(), "CAP");
  if (target >= confidential.cols()) {
    throw ValidationError("CAP: target index out of range");
  }
  if (std::find(keys.begin(), keys.end(), target) != keys.end()) {
    throw ValidationError("CAP: target must not be one of the keys");
  }
  confidential.RequireComplete("CAP");
  synthetic.RequireComplete("CAP");

  const auto arity = static_cast<std::size_t>(confidential.codebook()[target].arity());
  std::unordered_map<std::string, std::vector<std::size_t>> counts;
  for (std::size_t r = 0; r < synthetic.rows(); ++r) {
    auto& c = counts[KeyOf(synthetic, r, keys)];
    if (c.empty()) c.assign(arity + 1, 0);  // [0] holds the key total
    ++c[0];
    ++c[static_cast<std::size_t>(synthetic.at(r, target))];
  }

  CapResult out;
  out.per_record.reserve(confidential.rows());
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < confidential.rows(); ++i) {
    auto it = counts.find(KeyOf(confidential, i, keys));
    if (it == counts.end()) {
      ++out.undefined_count;
      if (mode == CapUndefined::kZero) {
        out.per_record.emplace_back(0.0);
        ++used;
      } else {
        out.per_record.emplace_back(std::nullopt);
      }
      continue;
    }
    const auto& c = it->second;
    const double v = static_cast<double>(c[static_cast<std::size_t>(
                         confidential.at(i, target))]) /
                     static_cast<double>(c[0]);
    out.per_record.emplace_back(v);
    sum += v;
    ++used;
  }
  if (used > 0) out.average = sum / static_cast<double>(used);
  return out;
}

ClassificationRisk ClassificationRiskFor(
    const CategoricalDataset& confidential, const CategoricalDataset& synthetic,
    std::size_t target, std::span<const std::size_t> predictors,
    const ForestParams& params, std::uint64_t seed) {
  RequireSameCodebook(confidential, synthetic, "classification risk");
  RequireIndices(predictors, confidential.cols(), "classification risk");
  if (target >= confidential.cols()) {
    throw ValidationError("classification risk: target index out of range");
  }
  if (predictors.empty()) {
    throw ValidationError("classification risk: no predictors");
  }
  const auto& cb = confidential.codebook();

  const ForestModel model_a = FitForest(
      synthetic, target, predictors, params,
      DeriveSeed(seed, StreamPhase::kClassification, 0));
  const ForestModel model_b = FitForest(
      confidential, target, predictors, params,
      DeriveSeed(seed, StreamPhase::kClassification, 1));
  const auto pred_a = PredictClass(model_a, confidential);
  const auto pred_b = PredictClass(model_b, confidential);

  const auto classes = static_cast<std::size_t>(cb[target].arity());
  std::vector<std::size_t> support(classes + 1, 0), hit_a(classes + 1, 0),
      hit_b(classes + 1, 0), train_a(classes + 1, 0), train_b(classes + 1, 0);
  for (std::size_t i = 0; i < confidential.rows(); ++i) {
    const auto y = static_cast<std::size_t>(confidential.at(i, target));
    ++support[y];
    ++train_b[y];
    if (static_cast<std::size_t>(pred_a[i]) == y) ++hit_a[y];
    if (static_cast<std::size_t>(pred_b[i]) == y) ++hit_b[y];
  }
  for (std::size_t i = 0; i < synthetic.rows(); ++i) {
    ++train_a[static_cast<std::size_t>(synthetic.at(i, target))];
  }

  ClassificationRisk out;
  out.target = cb[target].name;
  out.predictors = cb.NamesOf(predictors);
  out.synthetic_model_constant = model_a.constant;
  out.confidential_model_constant = model_b.constant;
  for (std::size_t c = 1; c <= classes; ++c) {
    ClassErrorRow row;
    row.level = cb.LabelOf(target, static_cast<int>(c));
    row.support = support[c];
    row.absent_in_synthetic = train_a[c] == 0;
    row.absent_in_confidential = train_b[c] == 0;
    if (support[c] > 0) {
      const double n = static_cast<double>(support[c]);
      row.error_synthetic_trained =
          row.absent_in_synthetic ? 1.0 : 1.0 - static_cast<double>(hit_a[c]) / n;
      row.error_confidential_trained =
          1.0 - static_cast<double>(hit_b[c]) / n;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace synthcat
