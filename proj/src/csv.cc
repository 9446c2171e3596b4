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
#include "synthcat/csv.hpp"

#include <fstream>

#include "synthcat/error.hpp"

namespace synthcat {
namespace {

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool StartsWith(const std::string& s, const std::string& prefix) {
  return !prefix.empty() && s.compare(0, prefix.size(), prefix) == 0;
}

std::string Quote(const std::string& field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) ==
      std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line,
                                      char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError("csv: unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

CategoricalDataset ReadCsv(std::istream& in, const Codebook& codebook,
                           const CsvOptions& options) {
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    if (StartsWith(line, options.comment_prefix)) continue;
    have_header = true;
    break;
  }
  if (!have_header) throw ValidationError("csv: missing header row");
  const auto header = SplitCsvLine(line, options.delimiter);

  auto column_of = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    return std::nullopt;
  };

  const std::size_t r = codebook.size();
  std::vector<std::size_t> source(r);
  for (std::size_t j = 0; j < r; ++j) {
    auto c = column_of(codebook[j].name);
    if (!c) {
      throw ValidationError("csv: header is missing variable '" +
                            codebook[j].name + "'");
    }
    source[j] = *c;
  }
  std::optional<std::size_t> id_col;
  if (options.id_column) {
    id_col = column_of(*options.id_column);
    if (!id_col) {
      throw ValidationError("csv: header is missing id column '" +
                            *options.id_column + "'");
    }
  }

  std::vector<int> cells;
  std::vector<std::string> ids;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    if (line.empty()) continue;
    ++row;
    const auto fields = SplitCsvLine(line, options.delimiter);
    if (fields.size() != header.size()) {
      throw ValidationError("csv: row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < r; ++j) {
      const std::string& label = fields[source[j]];
      if (options.missing_tokens.contains(label)) {
        cells.push_back(kMissing);
        continue;
      }
      auto level = codebook.LevelOf(j, label);
      if (!level) {
        throw ValidationError("csv: row " + std::to_string(row) +
                              ", variable '" + codebook[j].name +
                              "': unknown level '" + label + "'");
      }
      cells.push_back(*level);
    }
    ids.push_back(id_col ? fields[*id_col] : std::to_string(row));
  }
  if (ids.empty()) throw ValidationError("csv: no data rows");
  return CategoricalDataset(codebook, std::move(cells), std::move(ids));
}

CategoricalDataset LoadCsv(const std::filesystem::path& path,
                           const Codebook& codebook,
                           const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("csv: cannot open '" + path.string() + "'");
  try {
    return ReadCsv(in, codebook, options);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void WriteCsv(std::ostream& out, const CategoricalDataset& data,
              const CsvOptions& options,
              const std::vector<std::string>& comments) {
  const char d = options.delimiter;
  for (const auto& c : comments) out << options.comment_prefix << ' ' << c << '\n';
  bool first = true;
  if (options.id_column) {
    out << Quote(*options.id_column, d);
    first = false;
  }
  for (const auto& v : data.codebook().variables()) {
    if (!first) out << d;
    out << Quote(v.name, d);
    first = false;
  }
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    first = true;
    if (options.id_column) {
      out << Quote(data.record_id(i), d);
      first = false;
    }
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (!first) out << d;
      const int v = data.at(i, j);
      if (v != kMissing) out << Quote(data.codebook().LabelOf(j, v), d);
      first = false;
    }
    out << '\n';
  }
}

void SaveCsv(const std::filesystem::path& path, const CategoricalDataset& data,
             const CsvOptions& options,
             const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputationError("cannot write '" + path.string() + "'");
  WriteCsv(out, data, options, comments);
}

}  // namespace synthcat
