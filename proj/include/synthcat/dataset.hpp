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
#ifndef SYNTHCAT_DATASET_HPP_
#define SYNTHCAT_DATASET_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synthcat {

// Cell value reserved for "missing" before listwise deletion. Observed levels
// are coded 1..d_j in codebook order.
inline constexpr int kMissing = 0;

struct VariableSpec {
  std::string name;
  std::vector<std::string> levels;
  bool sensitive = false;

  int arity() const { return static_cast<int>(levels.size()); }
  bool operator==(const VariableSpec&) const = default;
};

// Ordered variable list with level labels and sensitivity flags.
class Codebook {
 public:
  Codebook() = default;
  // Throws ValidationError on duplicate names, duplicate labels within a
  // variable, or a variable with fewer than two levels.
  explicit Codebook(std::vector<VariableSpec> variables);

  std::size_t size() const { return variables_.size(); }
  const std::vector<VariableSpec>& variables() const { return variables_; }
  const VariableSpec& operator[](std::size_t j) const { return variables_[j]; }

  std::optional<std::size_t> Find(std::string_view name) const;
  // Throws ValidationError naming the unknown variable.
  std::size_t IndexOf(std::string_view name) const;
  std::vector<std::size_t> IndicesOf(std::span<const std::string> names) const;
  std::vector<std::string> NamesOf(std::span<const std::size_t> idx) const;

  // 1-based level index, or nullopt for an unknown label.
  std::optional<int> LevelOf(std::size_t j, std::string_view label) const;
  const std::string& LabelOf(std::size_t j, int level) const;

  std::vector<std::size_t> SensitiveIndices() const;
  std::vector<std::size_t> NonSensitiveIndices() const;
  // Partial synthesis needs at least one variable on each side.
  void RequirePartialSynthesisReady() const;

  bool operator==(const Codebook&) const = default;

 private:
  std::vector<VariableSpec> variables_;
};

// Immutable n x r table of level codes with stable record identifiers.
// Cells may hold kMissing only until DropIncomplete() is applied.
class CategoricalDataset {
 public:
  CategoricalDataset() = default;
  // `cells` is row-major, n * r. Throws ValidationError on out-of-range
  // codes, duplicate ids, size mismatches or n == 0.
  CategoricalDataset(Codebook codebook, std::vector<int> cells,
                     std::vector<std::string> record_ids);
  // Record ids default to "1".."n".
  CategoricalDataset(Codebook codebook, std::vector<int> cells);

  const Codebook& codebook() const { return codebook_; }
  std::size_t rows() const { return ids_.size(); }
  std::size_t cols() const { return codebook_.size(); }

  int at(std::size_t i, std::size_t j) const { return cells_[i * cols() + j]; }
  std::span<const int> row(std::size_t i) const {
    return {cells_.data() + i * cols(), cols()};
  }
  std::vector<int> Column(std::size_t j) const;
  const std::vector<int>& cells() const { return cells_; }
  const std::string& record_id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& record_ids() const { return ids_; }

  bool HasMissing() const;
  // Throws ValidationError when any cell is missing.
  void RequireComplete(std::string_view context) const;

  // Same codebook and record ids, new cell values.
  CategoricalDataset WithCells(std::vector<int> cells) const;
  CategoricalDataset SelectRows(std::span<const std::size_t> rows) const;
  // Labels for every cell; inverse of Encode().
  std::vector<std::vector<std::string>> Decode() const;
  static CategoricalDataset Encode(
      Codebook codebook, const std::vector<std::vector<std::string>>& labels,
      std::vector<std::string> record_ids);

  bool operator==(const CategoricalDataset&) const = default;

 private:
  Codebook codebook_;
  std::vector<int> cells_;
  std::vector<std::string> ids_;
};

// Rows with no missing cell, in original order. Throws ValidationError when
// nothing is left.
CategoricalDataset DropIncomplete(const CategoricalDataset& data);

// Dense relative-frequency table over a variable subset. Cells are laid out
// in mixed radix with the last variable varying fastest; zero-count cells are
// present explicitly.
struct FrequencyTable {
  std::vector<std::size_t> variables;
  std::vector<int> arities;
  std::vector<double> frequencies;

  std::size_t order() const { return variables.size(); }
  std::size_t cell_count() const { return frequencies.size(); }
  // 1-based level tuple of a cell.
  std::vector<int> CellLevels(std::size_t cell) const;
  std::size_t CellIndex(std::span<const int> levels) const;
};

FrequencyTable CrossTabulate(const CategoricalDataset& data,
                             std::span<const std::size_t> variables);
FrequencyTable CrossTabulate(const CategoricalDataset& data,
                             std::span<const std::string> variables);

// Every k-subset of `variables` in lexicographic order.
std::vector<std::vector<std::size_t>> Combinations(
    std::span<const std::size_t> variables, std::size_t k);

}  // namespace synthcat

#endif  // SYNTHCAT_DATASET_HPP_
