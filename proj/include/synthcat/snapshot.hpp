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
#ifndef SYNTHCAT_SNAPSHOT_HPP_
#define SYNTHCAT_SNAPSHOT_HPP_

// JSON forms of the codebook and sampler settings, and persistence of
// retained posterior draws.
//
// JSON snapshot (format "synthcat-draws", version 1):
//   { "format", "version", "config_hash", "seed", "hyper": {...},
//     "codebook": [...], "draws": [ { "sweep", "alpha", "occupied",
//     "weights": [K], "kernels": [ [ [d_j] x K ] per variable ] } ] }
//
// Binary snapshot: the 8 bytes "SCDRAWS1", a little-endian uint64 length,
// that many bytes of the JSON document above with "draws" replaced by
// "draw_count", then per draw: int32 sweep, int32 occupied, float64 alpha,
// K float64 weights, and each variable's K x d_j kernel in row-major order.

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "synthcat/dataset.hpp"
#include "synthcat/dpmpm.hpp"

namespace synthcat {

nlohmann::json CodebookToJson(const Codebook& codebook);
// Accepts the array form written by CodebookToJson, or an object with a
// "variables" array. Throws ValidationError.
Codebook CodebookFromJson(const nlohmann::json& j);

nlohmann::json HyperparamsToJson(const DpmpmHyperparams& hyper);

enum class SnapshotFormat { kJson, kBinary };

SnapshotFormat ParseSnapshotFormat(const std::string& name);

void SaveDraws(const std::filesystem::path& path, const PosteriorDraws& draws,
               SnapshotFormat format, const std::string& config_hash);
// Detects the format from the leading bytes. Throws ValidationError on a
// malformed or unsupported snapshot.
PosteriorDraws LoadDraws(const std::filesystem::path& path);

}  // namespace synthcat

#endif  // SYNTHCAT_SNAPSHOT_HPP_
