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
#include "synthcat/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "synthcat/error.hpp"

namespace synthcat {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& key, const std::string& what) {
  throw ValidationError("config: " + key + ": " + what);
}

const json* Child(const json& obj, const std::string& name) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(name);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void RequireObject(const json& j, const std::string& key) {
  if (!j.is_object()) Fail(key, "expected an object");
}

template <typename T>
T Get(const json& obj, const std::string& name, const std::string& path,
      T fallback) {
  const json* v = Child(obj, name);
  if (!v) return fallback;
  try {
    return v->get<T>();
  } catch (const json::exception&) {
    Fail(path + name, "has the wrong type");
  }
}

std::vector<std::string> StringList(const json& obj, const std::string& name,
                                    const std::string& path) {
  const json* v = Child(obj, name);
  if (!v) return {};
  if (!v->is_array()) Fail(path + name, "expected a list of variable names");
  std::vector<std::string> out;
  for (const auto& e : *v) {
    if (!e.is_string()) Fail(path + name, "expected a list of variable names");
    out.push_back(e.get<std::string>());
  }
  return out;
}

ForestParams ParseForest(const json& obj, const std::string& path,
                         ForestParams f) {
  f.n_trees = Get(obj, "n_trees", path, f.n_trees);
  f.max_depth = Get(obj, "max_depth", path, f.max_depth);
  f.min_leaf = Get(obj, "min_leaf", path, f.min_leaf);
  f.features_per_split = Get(obj, "features_per_split", path, f.features_per_split);
  f.bootstrap = Get(obj, "bootstrap", path, f.bootstrap);
  if (f.n_trees < 1) Fail(path + "n_trees", "must be at least 1");
  if (f.min_leaf < 1) Fail(path + "min_leaf", "must be at least 1");
  if (f.max_depth < 0 || f.features_per_split < 0) {
    Fail(path + "max_depth", "must not be negative");
  }
  return f;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

void RequireVariables(const Codebook& cb, std::span<const std::string> names,
                      const std::string& key) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!cb.Find(n)) Fail(key, "unknown variable '" + n + "'");
    if (!seen.insert(n).second) Fail(key, "variable '" + n + "' listed twice");
  }
}

void RequireLevel(const Codebook& cb, const std::string& var,
                  const std::string& level, const std::string& key) {
  const auto j = cb.Find(var);
  if (!j) Fail(key, "unknown variable '" + var + "'");
  if (!cb.LevelOf(*j, level)) {
    Fail(key, "variable '" + var + "' has no level '" + level + "'");
  }
}

}  // namespace

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HashHex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void PipelineConfig::Validate() const {
  try {
    sampler.Validate();
  } catch (const ValidationError& e) {
    Fail("sampler", e.what());
  }
  RequireVariables(codebook, sensitive_vars, "synthesis.sensitive_vars");
  if (sensitive_vars.empty()) {
    Fail("synthesis.sensitive_vars",
         "no variables given and none flagged sensitive in the codebook");
  }
  for (const auto& n : sensitive_vars) {
    if (!codebook[codebook.IndexOf(n)].sensitive) {
      Fail("synthesis.sensitive_vars",
           "'" + n + "' is not flagged sensitive in the codebook");
    }
  }
  if (sensitive_vars.size() == codebook.size()) {
    Fail("synthesis.sensitive_vars",
         "at least one variable must stay unsynthesized");
  }
  for (int t : utility.table_orders) {
    if (t < 1 || static_cast<std::size_t>(t) > codebook.size()) {
      Fail("utility.table_orders", "order " + std::to_string(t) + " out of range");
    }
  }
  for (const auto& e : utility.estimands) {
    RequireLevel(codebook, e.variable, e.level, "utility.estimands");
  }
  for (const auto& r : utility.regressions) {
    RequireLevel(codebook, r.target, r.positive_level, "utility.regressions");
    RequireVariables(codebook, r.predictors, "utility.regressions.predictors");
    if (std::find(r.predictors.begin(), r.predictors.end(), r.target) !=
        r.predictors.end()) {
      Fail("utility.regressions", "target '" + r.target + "' is also a predictor");
    }
  }
  RequireVariables(codebook, risk.known_vars, "risk.known_vars");
  RequireVariables(codebook, risk.linkage_keys, "risk.linkage_keys");
  RequireVariables(codebook, risk.linkage_blocking, "risk.linkage_blocking");
  if (risk.linkage_keys.size() > 20) {
    Fail("risk.linkage_keys", "at most 20 keys are supported");
  }
  if (risk.cap) {
    RequireVariables(codebook, risk.cap->keys, "risk.cap.keys");
    if (risk.cap->keys.empty()) Fail("risk.cap.keys", "must not be empty");
    if (!codebook.Find(risk.cap->target)) {
      Fail("risk.cap.target", "unknown variable '" + risk.cap->target + "'");
    }
    if (std::find(sensitive_vars.begin(), sensitive_vars.end(),
                  risk.cap->target) == sensitive_vars.end()) {
      Fail("risk.cap.target", "'" + risk.cap->target + "' is not synthesized");
    }
    if (std::find(risk.cap->keys.begin(), risk.cap->keys.end(),
                  risk.cap->target) != risk.cap->keys.end()) {
      Fail("risk.cap.keys", "must not contain the target");
    }
  }
  if (risk.classification) {
    const auto& c = *risk.classification;
    if (!codebook.Find(c.target)) {
      Fail("risk.classification.target", "unknown variable '" + c.target + "'");
    }
    RequireVariables(codebook, c.predictors, "risk.classification.predictors");
    if (c.predictors.empty()) {
      Fail("risk.classification.predictors", "must not be empty");
    }
    if (std::find(c.predictors.begin(), c.predictors.end(), c.target) !=
        c.predictors.end()) {
      Fail("risk.classification.predictors", "must not contain the target");
    }
  }
}

std::string PipelineConfig::Hash() const {
  json copy = document;
  copy.erase("output_dir");
  return HashHex(Fnv1a64(copy.dump()));
}

PipelineConfig ParseConfig(json document, const std::filesystem::path& base_dir,
                           const ConfigOverrides& overrides) {
  RequireObject(document, "(root)");
  if (overrides.seed) {
    document["sampler"]["seed"] = *overrides.seed;
  }
  if (overrides.output_dir) {
    document["output_dir"] = overrides.output_dir->string();
  }

  PipelineConfig c;
  const json* input = Child(document, "input");
  if (!input || !input->is_string()) Fail("input", "required path to a CSV file");
  c.input = Resolve(base_dir, input->get<std::string>());

  if (const json* csv = Child(document, "csv")) {
    RequireObject(*csv, "csv");
    const auto delim = Get<std::string>(*csv, "delimiter", "csv.", ",");
    if (delim.size() != 1) Fail("csv.delimiter", "must be a single character");
    c.csv.delimiter = delim[0];
    if (Child(*csv, "missing_tokens")) {
      const auto tokens = StringList(*csv, "missing_tokens", "csv.");
      c.csv.missing_tokens = {tokens.begin(), tokens.end()};
    }
    if (const json* id = Child(*csv, "id_column")) {
      if (!id->is_string()) Fail("csv.id_column", "expected a column name");
      c.csv.id_column = id->get<std::string>();
    }
  }

  const json* cb = Child(document, "codebook");
  if (!cb) Fail("codebook", "required (inline or a path to a JSON file)");
  try {
    c.codebook = cb->is_string()
                     ? CodebookFromJson(ReadJsonFile(Resolve(base_dir, cb->get<std::string>())))
                     : CodebookFromJson(*cb);
  } catch (const ValidationError& e) {
    Fail("codebook", e.what());
  }

  c.output_dir = Resolve(base_dir, Get<std::string>(document, "output_dir", "", "out"));

  const json* sampler = Child(document, "sampler");
  if (!sampler) Fail("sampler", "required (sampler.seed is mandatory)");
  RequireObject(*sampler, "sampler");
  if (!Child(*sampler, "seed")) Fail("sampler.seed", "required");
  auto& h = c.sampler;
  h.classes = Get(*sampler, "K", "sampler.", h.classes);
  h.a_alpha = Get(*sampler, "a_alpha", "sampler.", h.a_alpha);
  h.b_alpha = Get(*sampler, "b_alpha", "sampler.", h.b_alpha);
  h.dirichlet_a = Get(*sampler, "dirichlet_a", "sampler.", h.dirichlet_a);
  h.nrun = Get(*sampler, "nrun", "sampler.", h.nrun);
  h.burn = Get(*sampler, "burn", "sampler.", h.burn);
  h.thin = Get(*sampler, "thin", "sampler.", h.thin);
  h.replicates = Get(*sampler, "m", "sampler.", h.replicates);
  h.seed = Get<std::uint64_t>(*sampler, "seed", "sampler.", 0);
  const auto selection =
      Get<std::string>(*sampler, "draw_selection", "sampler.", "evenly_spaced");
  if (selection == "evenly_spaced") {
    c.draw_selection = DrawSelection::kEvenlySpaced;
  } else if (selection == "last_m") {
    c.draw_selection = DrawSelection::kLastM;
  } else {
    Fail("sampler.draw_selection", "expected 'evenly_spaced' or 'last_m'");
  }
  try {
    c.snapshot_format = ParseSnapshotFormat(
        Get<std::string>(*sampler, "snapshot_format", "sampler.", "json"));
  } catch (const ValidationError& e) {
    Fail("sampler.snapshot_format", e.what());
  }

  if (const json* syn = Child(document, "synthesis")) {
    RequireObject(*syn, "synthesis");
    c.sensitive_vars = StringList(*syn, "sensitive_vars", "synthesis.");
    const auto mode = Get<std::string>(*syn, "z_mode", "synthesis.", "conditional");
    if (mode == "conditional") {
      c.z_mode = ClassRedraw::kConditional;
    } else if (mode == "prior") {
      c.z_mode = ClassRedraw::kPrior;
    } else {
      Fail("synthesis.z_mode", "expected 'conditional' or 'prior'");
    }
    c.reuse_draws = Get(*syn, "reuse_draws", "synthesis.", false);
  }
  if (c.sensitive_vars.empty()) {
    c.sensitive_vars = c.codebook.NamesOf(c.codebook.SensitiveIndices());
  }

  if (const json* u = Child(document, "utility")) {
    RequireObject(*u, "utility");
    const auto model = Get<std::string>(*u, "pmse_model", "utility.", "logistic");
    if (model == "logistic") {
      c.utility.pmse_model = PropensityModel::kLogistic;
    } else if (model == "forest") {
      c.utility.pmse_model = PropensityModel::kForest;
    } else {
      Fail("utility.pmse_model", "expected 'logistic' or 'forest'");
    }
    if (const json* f = Child(*u, "pmse_forest")) {
      c.utility.pmse_forest = ParseForest(*f, "utility.pmse_forest.", c.utility.pmse_forest);
    }
    c.utility.table_orders =
        Get(*u, "table_orders", "utility.", c.utility.table_orders);
    c.utility.table_scope = Get(*u, "full_enumeration", "utility.", false)
                                ? TableScope::kAll
                                : TableScope::kTouchingFocus;
    if (const json* es = Child(*u, "estimands")) {
      if (!es->is_array()) Fail("utility.estimands", "expected a list");
      for (const auto& e : *es) {
        c.utility.estimands.push_back(
            {Get<std::string>(e, "variable", "utility.estimands.", ""),
             Get<std::string>(e, "level", "utility.estimands.", "")});
      }
    }
    if (const json* rs = Child(*u, "regressions")) {
      if (!rs->is_array()) Fail("utility.regressions", "expected a list");
      for (const auto& r : *rs) {
        c.utility.regressions.push_back(
            {Get<std::string>(r, "target", "utility.regressions.", ""),
             Get<std::string>(r, "positive_level", "utility.regressions.", ""),
             StringList(r, "predictors", "utility.regressions.")});
      }
    }
  }

  if (const json* r = Child(document, "risk")) {
    RequireObject(*r, "risk");
    c.risk.known_vars = StringList(*r, "known_vars", "risk.");
    c.risk.linkage_keys = StringList(*r, "linkage_keys", "risk.");
    c.risk.linkage_blocking = StringList(*r, "linkage_blocking", "risk.");
    c.risk.linkage_threshold = Get(*r, "linkage_threshold", "risk.", 0.0);
    if (const json* cap = Child(*r, "cap")) {
      RequireObject(*cap, "risk.cap");
      CapSpec spec;
      spec.keys = StringList(*cap, "keys", "risk.cap.");
      spec.target = Get<std::string>(*cap, "target", "risk.cap.", "");
      const auto mode = Get<std::string>(*cap, "undefined_mode", "risk.cap.", "exclude");
      if (mode == "exclude") {
        spec.undefined = CapUndefined::kExclude;
      } else if (mode == "zero") {
        spec.undefined = CapUndefined::kZero;
      } else {
        Fail("risk.cap.undefined_mode", "expected 'exclude' or 'zero'");
      }
      c.risk.cap = spec;
    }
    if (const json* cl = Child(*r, "classification")) {
      RequireObject(*cl, "risk.classification");
      ClassificationSpec spec;
      spec.target = Get<std::string>(*cl, "target", "risk.classification.", "");
      spec.predictors = StringList(*cl, "predictors", "risk.classification.");
      spec.forest = ParseForest(*cl, "risk.classification.", spec.forest);
      c.risk.classification = spec;
    }
  }

  c.document = std::move(document);
  c.Validate();
  return c;
}

PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const ConfigOverrides& overrides) {
  return ParseConfig(ReadJsonFile(path), path.parent_path(), overrides);
}

}  // namespace synthcat
