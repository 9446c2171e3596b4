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
#include "synthcat/dataset.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "synthcat/error.hpp"

namespace synthcat {

Codebook::Codebook(std::vector<VariableSpec> variables)
    : variables_(std::move(variables)) {
  std::unordered_set<std::string> names;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw ValidationError("codebook: empty variable name");
    if (!names.insert(v.name).second) {
      throw ValidationError("codebook: duplicate variable '" + v.name + "'");
    }
    if (v.levels.size() < 2) {
      throw ValidationError("codebook: variable '" + v.name +
                            "' needs at least two levels");
    }
    std::unordered_set<std::string> labels;
    for (const auto& l : v.levels) {
      if (!labels.insert(l).second) {
        throw ValidationError("codebook: variable '" + v.name +
                              "' repeats level '" + l + "'");
      }
    }
  }
}

std::optional<std::size_t> Codebook::Find(std::string_view name) const {
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].name == name) return j;
  }
  return std::nullopt;
}

std::size_t Codebook::IndexOf(std::string_view name) const {
  if (auto j = Find(name)) return *j;
  throw ValidationError("unknown variable '" + std::string(name) + "'");
}

std::vector<std::size_t> Codebook::IndicesOf(
    std::span<const std::string> names) const {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    const std::size_t j = IndexOf(n);
    if (std::find(out.begin(), out.end(), j) != out.end()) {
      throw ValidationError("variable '" + n + "' listed twice");
    }
    out.push_back(j);
  }
  return out;
}

std::vector<std::string> Codebook::NamesOf(
    std::span<const std::size_t> idx) const {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (std::size_t j : idx) out.push_back(variables_.at(j).name);
  return out;
}

std::optional<int> Codebook::LevelOf(std::size_t j,
                                     std::string_view label) const {
  const auto& levels = variables_[j].levels;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (levels[l] == label) return static_cast<int>(l + 1);
  }
  return std::nullopt;
}

const std::string& Codebook::LabelOf(std::size_t j, int level) const {
  return variables_.at(j).levels.at(static_cast<std::size_t>(level - 1));
}

std::vector<std::size_t> Codebook::SensitiveIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].sensitive) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> Codebook::NonSensitiveIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (!variables_[j].sensitive) out.push_back(j);
  }
  return out;
}

void Codebook::RequirePartialSynthesisReady() const {
  if (SensitiveIndices().empty() || NonSensitiveIndices().empty()) {
    throw ValidationError(
        "codebook: partial synthesis needs at least one sensitive and one "
        "non-sensitive variable");
  }
}

CategoricalDataset::CategoricalDataset(Codebook codebook,
                                       std::vector<int> cells,
                                       std::vector<std::string> record_ids)
    : codebook_(std::move(codebook)),
      cells_(std::move(cells)),
      ids_(std::move(record_ids)) {
  const std::size_t r = codebook_.size();
  if (r == 0) throw ValidationError("dataset: codebook has no variables");
  if (ids_.empty()) throw ValidationError("dataset: no rows");
  if (cells_.size() != ids_.size() * r) {
    throw ValidationError("dataset: cell count does not match n * r");
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const int v = cells_[i * r + j];
      if (v < kMissing || v > codebook_[j].arity()) {
        throw ValidationError("dataset: row " + std::to_string(i + 1) +
                              ", variable '" + codebook_[j].name +
                              "': level code " + std::to_string(v) +
                              " out of range");
      }
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) {
      throw ValidationError("dataset: duplicate record id '" + id + "'");
    }
  }
}

namespace {

std::vector<std::string> SequentialIds(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i + 1);
  return ids;
}

}  // namespace

CategoricalDataset::CategoricalDataset(Codebook codebook,
                                       std::vector<int> cells)
    : CategoricalDataset(
          codebook, cells,
          SequentialIds(codebook.size() == 0 ? 0
                                             : cells.size() / codebook.size())) {}

std::vector<int> CategoricalDataset::Column(std::size_t j) const {
  std::vector<int> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, j);
  return out;
}

bool CategoricalDataset::HasMissing() const {
  return std::find(cells_.begin(), cells_.end(), kMissing) != cells_.end();
}

void CategoricalDataset::RequireComplete(std::string_view context) const {
  if (HasMissing()) {
    throw ValidationError(std::string(context) +
                          ": dataset has missing cells; drop incomplete rows "
                          "first");
  }
}

CategoricalDataset CategoricalDataset::WithCells(std::vector<int> cells) const {
  return CategoricalDataset(codebook_, std::move(cells), ids_);
}

CategoricalDataset CategoricalDataset::SelectRows(
    std::span<const std::size_t> rows) const {
  std::vector<int> cells;
  std::vector<std::string> ids;
  cells.reserve(rows.size() * cols());
  ids.reserve(rows.size());
  for (std::size_t i : rows) {
    auto r = row(i);
    cells.insert(cells.end(), r.begin(), r.end());
    ids.push_back(ids_[i]);
  }
  return CategoricalDataset(codebook_, std::move(cells), std::move(ids));
}

std::vector<std::vector<std::string>> CategoricalDataset::Decode() const {
  std::vector<std::vector<std::string>> out(rows(),
                                            std::vector<std::string>(cols()));
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      const int v = at(i, j);
      out[i][j] = v == kMissing ? std::string() : codebook_.LabelOf(j, v);
    }
  }
  return out;
}

CategoricalDataset CategoricalDataset::Encode(
    Codebook codebook, const std::vector<std::vector<std::string>>& labels,
    std::vector<std::string> record_ids) {
  const std::size_t r = codebook.size();
  std::vector<int> cells;
  cells.reserve(labels.size() * r);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].size() != r) {
      throw ValidationError("encode: row " + std::to_string(i + 1) +
                            " has the wrong width");
    }
    for (std::size_t j = 0; j < r; ++j) {
      auto level = codebook.LevelOf(j, labels[i][j]);
      if (!level) {
        throw ValidationError("encode: row " + std::to_string(i + 1) +
                              ", variable '" + codebook[j].name +
                              "': unknown level '" + labels[i][j] + "'");
      }
      cells.push_back(*level);
    }
  }
  return CategoricalDataset(std::move(codebook), std::move(cells),
                            std::move(record_ids));
}

CategoricalDataset DropIncomplete(const CategoricalDataset& data) {
  std::vector<std::size_t> keep;
  keep.reserve(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto r = data.row(i);
    if (std::find(r.begin(), r.end(), kMissing) == r.end()) keep.push_back(i);
  }
  if (keep.empty()) {
    throw ValidationError("drop_incomplete: every row has a missing cell");
  }
  if (keep.size() == data.rows()) return data;
  return data.SelectRows(keep);
}

std::vector<int> FrequencyTable::CellLevels(std::size_t cell) const {
  std::vector<int> levels(arities.size());
  for (std::size_t k = arities.size(); k-- > 0;) {
    const auto a = static_cast<std::size_t>(arities[k]);
    levels[k] = static_cast<int>(cell % a) + 1;
    cell /= a;
  }
  return levels;
}

std::size_t FrequencyTable::CellIndex(std::span<const int> levels) const {
  std::size_t cell = 0;
  for (std::size_t k = 0; k < arities.size(); ++k) {
    cell = cell * static_cast<std::size_t>(arities[k]) +
           static_cast<std::size_t>(levels[k] - 1);
  }
  return cell;
}

FrequencyTable CrossTabulate(const CategoricalDataset& data,
                             std::span<const std::size_t> variables) {
  if (variables.empty() || variables.size() > data.cols()) {
    throw ValidationError("cross_tabulate: order must be in [1, r]");
  }
  FrequencyTable table;
  table.variables.assign(variables.begin(), variables.end());
  std::size_t cells = 1;
  for (std::size_t j : variables) {
    if (j >= data.cols()) throw ValidationError("cross_tabulate: bad variable");
    if (std::count(variables.begin(), variables.end(), j) > 1) {
      throw ValidationError("cross_tabulate: variables must be distinct");
    }
    table.arities.push_back(data.codebook()[j].arity());
    cells *= static_cast<std::size_t>(table.arities.back());
  }
  data.RequireComplete("cross_tabulate");
  std::vector<std::size_t> counts(cells, 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::size_t cell = 0;
    for (std::size_t k = 0; k < variables.size(); ++k) {
      cell = cell * static_cast<std::size_t>(table.arities[k]) +
             static_cast<std::size_t>(data.at(i, variables[k]) - 1);
    }
    ++counts[cell];
  }
  const double n = static_cast<double>(data.rows());
  table.frequencies.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    table.frequencies[c] = static_cast<double>(counts[c]) / n;
  }
  return table;
}

FrequencyTable CrossTabulate(const CategoricalDataset& data,
                             std::span<const std::string> variables) {
  const auto idx = data.codebook().IndicesOf(variables);
  return CrossTabulate(data, idx);
}

std::vector<std::vector<std::size_t>> Combinations(
    std::span<const std::size_t> variables, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = variables.size();
  if (k == 0 || k > n) return out;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::vector<std::size_t> combo(k);
    for (std::size_t i = 0; i < k; ++i) combo[i] = variables[pick[i]];
    out.push_back(std::move(combo));
    std::size_t i = k;
    while (i-- > 0) {
      if (pick[i] != i + n - k) break;
      if (i == 0) return out;
    }
    if (pick[i] == i + n - k) return out;
    ++pick[i];
    for (std::size_t t = i + 1; t < k; ++t) pick[t] = pick[t - 1] + 1;
  }
}

}  // namespace synthcat
