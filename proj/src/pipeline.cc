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
#include "synthcat/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "synthcat/csv.hpp"
#include "synthcat/dpmpm.hpp"
#include "synthcat/error.hpp"
#include "synthcat/random.hpp"
#include "synthcat/simulate.hpp"
#include "synthcat/snapshot.hpp"

namespace synthcat {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kManifest[] = "manifest.json";
constexpr char kUtilityReport[] = "utility_report.json";
constexpr char kRiskReport[] = "risk_report.json";

void Say(const Logger& log, const std::string& line) {
  if (log) log(line);
}

std::string Provenance(const std::string& hash, std::uint64_t seed) {
  return "synthcat config_hash=" + hash + " seed=" + std::to_string(seed);
}

json Stamp(const PipelineConfig& config, json body) {
  body["config_hash"] = config.Hash();
  body["seed"] = config.sampler.seed;
  return body;
}

std::optional<double> MeanOfDefined(const std::vector<std::optional<double>>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& x : xs) {
    if (x) {
      sum += *x;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string FormatOptional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

CsvOptions ReplicateCsvOptions() {
  CsvOptions o;
  o.id_column = kRecordIdColumn;
  return o;
}

fs::path DrawsPath(const PipelineConfig& config) {
  return config.output_dir /
         (config.snapshot_format == SnapshotFormat::kBinary ? "draws.bin"
                                                            : "draws.json");
}

// Throws ValidationError if `path` is missing or was produced by another
// configuration.
json ReadStamped(const PipelineConfig& config, const fs::path& path) {
  if (!fs::exists(path)) {
    throw ValidationError("missing '" + path.string() + "'; run the earlier step first");
  }
  json j = ReadJsonFile(path);
  if (j.value("config_hash", std::string()) != config.Hash()) {
    throw ValidationError("'" + path.string() +
                          "' was produced by a different configuration; rerun it");
  }
  return j;
}

}  // namespace

void WriteTextFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw ComputationError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

UtilityReport EvaluateUtility(const CategoricalDataset& confidential,
                              std::span<const CategoricalDataset> replicates,
                              const UtilitySpec& spec,
                              std::span<const std::size_t> sensitive,
                              std::uint64_t seed) {
  if (replicates.empty()) throw ValidationError("utility: no replicates");
  const auto& cb = confidential.codebook();
  UtilityReport r;
  PmseOptions po;
  po.model = spec.pmse_model;
  po.forest = spec.pmse_forest;
  po.seed = DeriveSeed(seed, StreamPhase::kPropensity, 0);
  r.pmse_model = spec.pmse_model == PropensityModel::kForest ? "forest" : "logistic";
  r.pmse = PmseMean(confidential, replicates, po);

  for (int t : spec.table_orders) {
    DeviationOrder d;
    d.order = t;
    double sum = 0.0;
    for (const auto& rep : replicates) {
      d.replicates.push_back(
          RelativeDifferences(confidential, rep, t, sensitive, spec.table_scope));
      sum += d.replicates.back().mean_absolute_deviation;
    }
    d.mean_mad = sum / static_cast<double>(replicates.size());
    r.deviations.push_back(std::move(d));
  }

  if (replicates.size() >= 2) {
    for (const auto& e : spec.estimands) {
      const std::size_t j = cb.IndexOf(e.variable);
      r.estimands.push_back(ProportionUtilityFor(confidential, replicates, j,
                                                 *cb.LevelOf(j, e.level)));
    }
    for (const auto& g : spec.regressions) {
      const std::size_t j = cb.IndexOf(g.target);
      const auto preds = cb.IndicesOf(g.predictors);
      r.regressions.push_back(RegressionUtilityFor(
          confidential, replicates, j, *cb.LevelOf(j, g.positive_level), preds));
    }
  } else if (!spec.estimands.empty() || !spec.regressions.empty()) {
    throw ValidationError("utility: combining rules need at least 2 replicates");
  }
  return r;
}

RiskReport EvaluateRisk(const CategoricalDataset& confidential,
                        std::span<const CategoricalDataset> replicates,
                        const RiskSpec& spec, std::uint64_t seed) {
  if (replicates.empty()) throw ValidationError("risk: no replicates");
  const auto& cb = confidential.codebook();
  RiskReport r;
  r.known_vars = spec.known_vars;
  const double m = static_cast<double>(replicates.size());

  if (!spec.known_vars.empty()) {
    const auto known = cb.IndicesOf(spec.known_vars);
    MatchRiskSection s;
    s.baseline = MatchRisk(confidential, confidential, known);
    std::vector<std::optional<double>> false_rates;
    for (const auto& rep : replicates) {
      s.replicates.push_back(MatchRisk(confidential, rep, known));
      const auto& last = s.replicates.back();
      s.mean_expected += last.expected_match_risk / m;
      s.mean_true_rate += last.true_match_rate / m;
      false_rates.push_back(last.false_rate_undefined
                                ? std::nullopt
                                : std::optional<double>(last.false_match_rate));
    }
    s.mean_false_rate = MeanOfDefined(false_rates);
    r.match = std::move(s);
  }

  r.linkage_keys = spec.linkage_keys.empty() ? spec.known_vars : spec.linkage_keys;
  if (!r.linkage_keys.empty()) {
    const auto keys = cb.IndicesOf(r.linkage_keys);
    LinkageOptions lo;
    lo.threshold = spec.linkage_threshold;
    lo.blocking = cb.IndicesOf(spec.linkage_blocking);
    LinkageSection s;
    s.baseline = RecordLinkageRisk(confidential, confidential, keys, lo);
    std::vector<std::optional<double>> t_rates, f_rates;
    for (const auto& rep : replicates) {
      s.replicates.push_back(RecordLinkageRisk(confidential, rep, keys, lo));
      t_rates.push_back(s.replicates.back().true_link_rate);
      f_rates.push_back(s.replicates.back().false_link_rate);
    }
    s.mean_true_rate = MeanOfDefined(t_rates);
    s.mean_false_rate = MeanOfDefined(f_rates);
    r.linkage = std::move(s);
  }

  if (spec.cap) {
    const auto keys = cb.IndicesOf(spec.cap->keys);
    const std::size_t target = cb.IndexOf(spec.cap->target);
    CapSection s;
    s.target = spec.cap->target;
    s.keys = spec.cap->keys;
    s.mode = spec.cap->undefined;
    s.baseline = Cap(confidential, confidential, keys, target, s.mode);
    std::vector<std::optional<double>> avgs;
    for (const auto& rep : replicates) {
      s.replicates.push_back(Cap(confidential, rep, keys, target, s.mode));
      avgs.push_back(s.replicates.back().average);
    }
    s.mean_average = MeanOfDefined(avgs);
    r.cap = std::move(s);
  }

  if (spec.classification) {
    const std::size_t target = cb.IndexOf(spec.classification->target);
    const auto preds = cb.IndicesOf(spec.classification->predictors);
    ClassificationSection s;
    for (std::size_t l = 0; l < replicates.size(); ++l) {
      s.replicates.push_back(ClassificationRiskFor(
          confidential, replicates[l], target, preds, spec.classification->forest,
          DeriveSeed(seed, StreamPhase::kClassification, l)));
    }
    const auto& first = s.replicates.front().rows;
    for (std::size_t c = 0; c < first.size(); ++c) {
      ClassErrorRow row;
      row.level = first[c].level;
      row.support = first[c].support;
      std::vector<std::optional<double>> a, b;
      for (const auto& rep : s.replicates) {
        a.push_back(rep.rows[c].error_synthetic_trained);
        b.push_back(rep.rows[c].error_confidential_trained);
        row.absent_in_synthetic |= rep.rows[c].absent_in_synthetic;
        row.absent_in_confidential |= rep.rows[c].absent_in_confidential;
      }
      row.error_synthetic_trained = MeanOfDefined(a);
      row.error_confidential_trained = MeanOfDefined(b);
      s.mean.push_back(std::move(row));
    }
    r.classification = std::move(s);
  }
  return r;
}

CategoricalDataset LoadConfidential(const PipelineConfig& config) {
  return DropIncomplete(LoadCsv(config.input, config.codebook, config.csv));
}

fs::path ReplicatePath(const PipelineConfig& config, int l) {
  return config.output_dir / "replicates" /
         ("synthetic_" + std::to_string(l) + ".csv");
}

std::vector<CategoricalDataset> LoadReplicates(const PipelineConfig& config) {
  std::vector<CategoricalDataset> out;
  for (int l = 1; l <= config.sampler.replicates; ++l) {
    const fs::path p = ReplicatePath(config, l);
    if (!fs::exists(p)) {
      throw ValidationError("missing replicate '" + p.string() +
                            "'; run 'synthcat synthesize' first");
    }
    out.push_back(LoadCsv(p, config.codebook, ReplicateCsvOptions()));
  }
  return out;
}

void CmdSimulate(const fs::path& spec_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed, const Logger& log) {
  json doc = ReadJsonFile(spec_path);
  if (seed) doc["seed"] = *seed;
  const SimSpec spec = SimSpecFromJson(doc);
  const std::string hash = HashHex(Fnv1a64(doc.dump()));
  Say(log, "simulating " + std::to_string(spec.n) + " rows from " +
               std::to_string(spec.classes()) + " classes");
  const Simulation sim = Simulate(spec);
  fs::create_directories(out_dir);
  std::ostringstream csv;
  CsvOptions opts;
  opts.id_column = kRecordIdColumn;
  WriteCsv(csv, sim.data, opts, {Provenance(hash, spec.seed)});
  WriteTextFile(out_dir / "simulated.csv", csv.str());
  WriteTextFile(out_dir / "codebook.json",
                CanonicalDump(CodebookToJson(spec.codebook)));
  json truth = GroundTruthJson(spec, sim);
  truth["config_hash"] = hash;
  truth["seed"] = spec.seed;
  WriteTextFile(out_dir / "ground_truth.json", CanonicalDump(truth));
  Say(log, "wrote " + (out_dir / "simulated.csv").string());
}

void CmdSynthesize(const PipelineConfig& config, const Logger& log) {
  const CategoricalDataset raw = LoadCsv(config.input, config.codebook, config.csv);
  const CategoricalDataset data = DropIncomplete(raw);
  Say(log, std::to_string(data.rows()) + " of " + std::to_string(raw.rows()) +
               " rows retained after listwise deletion");
  const auto sensitive = config.codebook.IndicesOf(config.sensitive_vars);
  // Fail before the chain runs if m cannot be served.
  SelectDraws(config.sampler.RetainedCount(), config.sampler.replicates,
              config.draw_selection);

  fs::create_directories(config.output_dir);
  const fs::path draws_path = DrawsPath(config);
  std::optional<PosteriorDraws> draws;
  if (config.reuse_draws && fs::exists(draws_path)) {
    PosteriorDraws loaded = LoadDraws(draws_path);
    if (HyperparamsToJson(loaded.hyper) == HyperparamsToJson(config.sampler) &&
        loaded.codebook == config.codebook) {
      Say(log, "reusing posterior draws from " + draws_path.string());
      draws = std::move(loaded);
    }
  }
  if (!draws) {
    int last_decile = -1;
    draws = RunChain(data, config.sampler, [&](int sweep, int nrun) {
      const int decile = sweep * 10 / nrun;
      if (decile != last_decile) {
        last_decile = decile;
        Say(log, "sweep " + std::to_string(sweep) + "/" + std::to_string(nrun));
      }
    });
    SaveDraws(draws_path, *draws, config.snapshot_format, config.Hash());
  }

  SynthesisOptions so;
  so.selection = config.draw_selection;
  so.redraw = config.z_mode;
  const SyntheticReplicates reps = GenerateReplicates(data, *draws, sensitive, so);

  json files = json::array();
  for (std::size_t l = 0; l < reps.datasets.size(); ++l) {
    const fs::path p = ReplicatePath(config, static_cast<int>(l + 1));
    const auto& draw = draws->draws[reps.draw_indices[l]];
    std::ostringstream csv;
    WriteCsv(csv, reps.datasets[l], ReplicateCsvOptions(),
             {Provenance(config.Hash(), config.sampler.seed) + " replicate=" +
              std::to_string(l + 1) + " sweep=" + std::to_string(draw.sweep)});
    WriteTextFile(p, csv.str());
    files.push_back(json{{"file", fs::relative(p, config.output_dir).generic_string()},
                         {"draw_index", reps.draw_indices[l] + 1},
                         {"sweep", draw.sweep},
                         {"occupied_classes", draw.occupied}});
  }
  json manifest = Stamp(config, json{
      {"format", "synthcat-manifest"},
      {"rows_input", raw.rows()},
      {"rows_retained", data.rows()},
      {"rows_dropped", raw.rows() - data.rows()},
      {"sensitive_vars", config.sensitive_vars},
      {"z_mode", config.z_mode == ClassRedraw::kPrior ? "prior" : "conditional"},
      {"draw_selection", config.draw_selection == DrawSelection::kLastM
                             ? "last_m"
                             : "evenly_spaced"},
      {"hyper", HyperparamsToJson(config.sampler)},
      {"retained_draws", draws->draws.size()},
      {"draws_file", draws_path.filename().string()},
      {"replicates", files}});
  WriteTextFile(config.output_dir / kManifest, CanonicalDump(manifest));
  Say(log, "wrote " + std::to_string(files.size()) + " replicates to " +
               (config.output_dir / "replicates").string());
}

void CmdUtility(const PipelineConfig& config, const Logger& log) {
  ReadStamped(config, config.output_dir / kManifest);
  const CategoricalDataset conf = LoadConfidential(config);
  const auto reps = LoadReplicates(config);
  const auto sensitive = config.codebook.IndicesOf(config.sensitive_vars);
  Say(log, "evaluating utility over " + std::to_string(reps.size()) + " replicates");
  const UtilityReport report =
      EvaluateUtility(conf, reps, config.utility, sensitive, config.sampler.seed);

  json body = ToJson(report, config.codebook);
  body["format"] = "synthcat-utility";
  body["sensitive_vars"] = config.sensitive_vars;
  body["table_scope"] =
      config.utility.table_scope == TableScope::kAll ? "all" : "touching_sensitive";
  WriteTextFile(config.output_dir / kUtilityReport,
                CanonicalDump(Stamp(config, std::move(body))));

  const auto& cb = config.codebook;
  for (const auto& d : report.deviations) {
    std::ostringstream csv;
    csv << "# " << Provenance(config.Hash(), config.sampler.seed) << "\n";
    csv << "replicate,variables,levels,confidential,synthetic,relative\n";
    for (std::size_t l = 0; l < d.replicates.size(); ++l) {
      for (const auto& cell : d.replicates[l].cells) {
        std::vector<std::string> names, labels;
        for (std::size_t k = 0; k < cell.variables.size(); ++k) {
          names.push_back(cb[cell.variables[k]].name);
          labels.push_back(cb.LabelOf(cell.variables[k], cell.levels[k]));
        }
        csv << l + 1 << ',' << CsvField(Join(names, '|')) << ','
            << CsvField(Join(labels, '|')) << ',' << FormatDouble(cell.confidential)
            << ',' << FormatDouble(cell.synthetic) << ','
            << FormatOptional(cell.relative) << '\n';
      }
    }
    WriteTextFile(config.output_dir /
                      ("relative_diffs_t" + std::to_string(d.order) + ".csv"),
                  csv.str());
  }
  Say(log, "mean pMSE " + FormatDouble(report.pmse.mean));
}

void CmdRisk(const PipelineConfig& config, const Logger& log) {
  ReadStamped(config, config.output_dir / kManifest);
  const CategoricalDataset conf = LoadConfidential(config);
  const auto reps = LoadReplicates(config);
  Say(log, "evaluating disclosure risk over " + std::to_string(reps.size()) +
               " replicates");
  const RiskReport report = EvaluateRisk(conf, reps, config.risk, config.sampler.seed);

  json body = ToJson(report);
  body["format"] = "synthcat-risk";
  WriteTextFile(config.output_dir / kRiskReport,
                CanonicalDump(Stamp(config, std::move(body))));

  const std::string stamp = "# " + Provenance(config.Hash(), config.sampler.seed) + "\n";
  {
    std::ostringstream csv;
    csv << stamp << "record_id,cap_confidential";
    if (report.cap) {
      for (std::size_t l = 1; l <= report.cap->replicates.size(); ++l) {
        csv << ",cap_replicate_" << l;
      }
      csv << '\n';
      for (std::size_t i = 0; i < conf.rows(); ++i) {
        csv << CsvField(conf.record_id(i)) << ','
            << FormatOptional(report.cap->baseline.per_record[i]);
        for (const auto& rep : report.cap->replicates) {
          csv << ',' << FormatOptional(rep.per_record[i]);
        }
        csv << '\n';
      }
    } else {
      csv << '\n';
    }
    WriteTextFile(config.output_dir / "cap_per_record.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << stamp << "replicate,confidential_id,synthetic_id,weight,true_link\n";
    if (report.linkage) {
      auto dump = [&](const std::string& tag, const LinkageResult& res) {
        for (const auto& link : res.links) {
          csv << tag << ',' << CsvField(link.confidential_id) << ','
              << CsvField(link.synthetic_id) << ',' << FormatDouble(link.weight)
              << ',' << (link.true_link ? 1 : 0) << '\n';
        }
      };
      dump("baseline", report.linkage->baseline);
      for (std::size_t l = 0; l < report.linkage->replicates.size(); ++l) {
        dump(std::to_string(l + 1), report.linkage->replicates[l]);
      }
    }
    WriteTextFile(config.output_dir / "linkage_pairs.csv", csv.str());
  }
  if (report.match) {
    Say(log, "expected match risk: baseline " +
                 FormatDouble(report.match->baseline.expected_match_risk) +
                 ", synthetic mean " + FormatDouble(report.match->mean_expected));
  }
}

void CmdReport(const PipelineConfig& config, const Logger& log) {
  json manifest = ReadStamped(config, config.output_dir / kManifest);
  json body{{"format", "synthcat-report"}, {"manifest", manifest}};
  for (const auto& [key, file] : {std::pair{"utility", kUtilityReport},
                                  std::pair{"risk", kRiskReport}}) {
    const fs::path p = config.output_dir / file;
    body[key] = fs::exists(p) ? ReadStamped(config, p) : json(nullptr);
  }
  WriteTextFile(config.output_dir / "report.json",
                CanonicalDump(Stamp(config, std::move(body))));
  Say(log, "wrote " + (config.output_dir / "report.json").string());
}

}  // namespace synthcat
