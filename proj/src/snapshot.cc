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
#include "synthcat/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "synthcat/error.hpp"

namespace synthcat {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'S', 'C', 'D', 'R', 'A', 'W', 'S', '1'};
constexpr int kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary snapshots assume a little-endian host");

template <typename T>
void Put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T Take(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ValidationError("draws snapshot: truncated binary data");
  return value;
}

json Header(const PosteriorDraws& draws, const std::string& config_hash) {
  json j;
  j["format"] = "synthcat-draws";
  j["version"] = kVersion;
  j["config_hash"] = config_hash;
  j["seed"] = draws.hyper.seed;
  j["hyper"] = HyperparamsToJson(draws.hyper);
  j["codebook"] = CodebookToJson(draws.codebook);
  return j;
}

DpmpmHyperparams HyperFromJson(const json& j) {
  DpmpmHyperparams h;
  h.classes = j.at("K").get<int>();
  h.a_alpha = j.at("a_alpha").get<double>();
  h.b_alpha = j.at("b_alpha").get<double>();
  h.dirichlet_a = j.at("dirichlet_a").get<double>();
  h.nrun = j.at("nrun").get<int>();
  h.burn = j.at("burn").get<int>();
  h.thin = j.at("thin").get<int>();
  h.replicates = j.at("m").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

void CheckHeader(const json& j) {
  if (j.value("format", "") != "synthcat-draws") {
    throw ValidationError("draws snapshot: unrecognized format");
  }
  if (j.value("version", 0) != kVersion) {
    throw ValidationError("draws snapshot: unsupported version");
  }
}

}  // namespace

json CodebookToJson(const Codebook& codebook) {
  json arr = json::array();
  for (const auto& v : codebook.variables()) {
    arr.push_back({{"name", v.name}, {"levels", v.levels}, {"sensitive", v.sensitive}});
  }
  return arr;
}

Codebook CodebookFromJson(const json& j) {
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("variables")) {
      throw ValidationError("codebook: object form needs a 'variables' array");
    }
    arr = &j.at("variables");
  }
  if (!arr->is_array()) throw ValidationError("codebook: expected an array");
  std::vector<VariableSpec> vars;
  try {
    for (const auto& v : *arr) {
      VariableSpec spec;
      spec.name = v.at("name").get<std::string>();
      spec.levels = v.at("levels").get<std::vector<std::string>>();
      spec.sensitive = v.value("sensitive", false);
      vars.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("codebook: ") + e.what());
  }
  return Codebook(std::move(vars));
}

json HyperparamsToJson(const DpmpmHyperparams& h) {
  return {{"K", h.classes},         {"a_alpha", h.a_alpha},
          {"b_alpha", h.b_alpha},   {"dirichlet_a", h.dirichlet_a},
          {"nrun", h.nrun},         {"burn", h.burn},
          {"thin", h.thin},         {"m", h.replicates},
          {"seed", h.seed}};
}

SnapshotFormat ParseSnapshotFormat(const std::string& name) {
  if (name == "json") return SnapshotFormat::kJson;
  if (name == "binary") return SnapshotFormat::kBinary;
  throw ValidationError("snapshot format must be 'json' or 'binary', got '" +
                        name + "'");
}

void SaveDraws(const std::filesystem::path& path, const PosteriorDraws& draws,
               SnapshotFormat format, const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputationError("cannot write '" + path.string() + "'");
  json header = Header(draws, config_hash);
  if (format == SnapshotFormat::kJson) {
    json arr = json::array();
    for (const auto& d : draws.draws) {
      json kernels = json::array();
      for (const auto& theta : d.kernels) {
        json rows = json::array();
        for (Eigen::Index k = 0; k < theta.rows(); ++k) {
          std::vector<double> row(theta.row(k).begin(), theta.row(k).end());
          rows.push_back(row);
        }
        kernels.push_back(std::move(rows));
      }
      std::vector<double> w(d.weights.begin(), d.weights.end());
      arr.push_back({{"sweep", d.sweep},
                     {"alpha", d.alpha},
                     {"occupied", d.occupied},
                     {"weights", w},
                     {"kernels", std::move(kernels)}});
    }
    header["draws"] = std::move(arr);
    out << header.dump(1) << '\n';
    return;
  }
  header["draw_count"] = draws.draws.size();
  const std::string text = header.dump();
  out.write(kMagic, sizeof(kMagic));
  Put<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& d : draws.draws) {
    Put<std::int32_t>(out, d.sweep);
    Put<std::int32_t>(out, d.occupied);
    Put<double>(out, d.alpha);
    for (double w : d.weights) Put<double>(out, w);
    for (const auto& theta : d.kernels) {
      for (Eigen::Index k = 0; k < theta.rows(); ++k) {
        for (Eigen::Index l = 0; l < theta.cols(); ++l) Put<double>(out, theta(k, l));
      }
    }
  }
}

PosteriorDraws LoadDraws(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open draws snapshot '" + path.string() + "'");
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  const bool binary = in && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0;

  PosteriorDraws out;
  try {
    if (!binary) {
      in.clear();
      in.seekg(0);
      const json j = json::parse(in);
      CheckHeader(j);
      out.hyper = HyperFromJson(j.at("hyper"));
      out.codebook = CodebookFromJson(j.at("codebook"));
      for (const auto& d : j.at("draws")) {
        PosteriorDraw draw;
        draw.sweep = d.at("sweep").get<int>();
        draw.alpha = d.at("alpha").get<double>();
        draw.occupied = d.at("occupied").get<int>();
        const auto w = d.at("weights").get<std::vector<double>>();
        draw.weights = Eigen::Map<const Eigen::VectorXd>(
            w.data(), static_cast<Eigen::Index>(w.size()));
        for (const auto& rows : d.at("kernels")) {
          const auto m = rows.get<std::vector<std::vector<double>>>();
          Eigen::MatrixXd theta(static_cast<Eigen::Index>(m.size()),
                                m.empty() ? 0 : static_cast<Eigen::Index>(m[0].size()));
          for (std::size_t k = 0; k < m.size(); ++k) {
            for (std::size_t l = 0; l < m[k].size(); ++l) {
              theta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = m[k][l];
            }
          }
          draw.kernels.push_back(std::move(theta));
        }
        out.draws.push_back(std::move(draw));
      }
    } else {
      const auto len = Take<std::uint64_t>(in);
      std::string text(len, '\0');
      in.read(text.data(), static_cast<std::streamsize>(len));
      if (!in) throw ValidationError("draws snapshot: truncated header");
      const json j = json::parse(text);
      CheckHeader(j);
      out.hyper = HyperFromJson(j.at("hyper"));
      out.codebook = CodebookFromJson(j.at("codebook"));
      const auto count = j.at("draw_count").get<std::size_t>();
      const auto k = static_cast<Eigen::Index>(out.hyper.classes);
      for (std::size_t t = 0; t < count; ++t) {
        PosteriorDraw draw;
        draw.sweep = Take<std::int32_t>(in);
        draw.occupied = Take<std::int32_t>(in);
        draw.alpha = Take<double>(in);
        draw.weights.resize(k);
        for (Eigen::Index c = 0; c < k; ++c) draw.weights[c] = Take<double>(in);
        for (const auto& v : out.codebook.variables()) {
          Eigen::MatrixXd theta(k, v.arity());
          for (Eigen::Index c = 0; c < k; ++c) {
            for (Eigen::Index l = 0; l < theta.cols(); ++l) theta(c, l) = Take<double>(in);
          }
          draw.kernels.push_back(std::move(theta));
        }
        out.draws.push_back(std::move(draw));
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError("draws snapshot '" + path.string() + "': " + e.what());
  }
  return out;
}

}  // namespace synthcat
