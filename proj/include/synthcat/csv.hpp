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
#ifndef SYNTHCAT_CSV_HPP_
#define SYNTHCAT_CSV_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "synthcat/dataset.hpp"

namespace synthcat {

struct CsvOptions {
  char delimiter = ',';
  std::set<std::string> missing_tokens = {""};
  // Column holding record ids; rows are numbered 1..n when unset.
  std::optional<std::string> id_column;
  // Lines starting with this prefix before the header are skipped.
  std::string comment_prefix = "#";
};

// Splits one delimited record, honouring double-quoted fields.
std::vector<std::string> SplitCsvLine(const std::string& line, char delimiter);

// Reads a delimited file whose header names a superset of the codebook's
// variables. Cells matching a missing token become kMissing; any other label
// the codebook does not know is rejected with its row and variable.
CategoricalDataset LoadCsv(const std::filesystem::path& path,
                           const Codebook& codebook,
                           const CsvOptions& options = {});
CategoricalDataset ReadCsv(std::istream& in, const Codebook& codebook,
                           const CsvOptions& options = {});

// Writes the id column (when named) followed by every variable as labels.
// `comments` go first, each prefixed with options.comment_prefix.
void WriteCsv(std::ostream& out, const CategoricalDataset& data,
              const CsvOptions& options = {},
              const std::vector<std::string>& comments = {});
void SaveCsv(const std::filesystem::path& path, const CategoricalDataset& data,
             const CsvOptions& options = {},
             const std::vector<std::string>& comments = {});

}  // namespace synthcat

#endif  // SYNTHCAT_CSV_HPP_
