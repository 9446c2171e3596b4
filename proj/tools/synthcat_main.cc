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

// synthcat: partially synthetic categorical data with utility and risk
// evaluation.
//
//   synthcat simulate   --config simspec.json --out DIR
//   synthcat synthesize --config pipeline.json [--out DIR] [--seed N]
//   synthcat utility    --config pipeline.json
//   synthcat risk       --config pipeline.json
//   synthcat report     --config pipeline.json
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 runtime error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "synthcat/config.hpp"
#include "synthcat/error.hpp"
#include "synthcat/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags, bool out_required) {
  cmd->add_option("--config", flags.config, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* out = cmd->add_option("--out", flags.out, "output directory");
  if (out_required) out->required();
  cmd->add_option("--seed", flags.seed, "overrides the configured seed");
  cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

synthcat::PipelineConfig Load(const CommonFlags& flags) {
  synthcat::ConfigOverrides o;
  o.seed = flags.seed;
  if (!flags.out.empty()) o.output_dir = std::filesystem::path(flags.out);
  try {
    return synthcat::LoadConfig(flags.config, o);
  } catch (const synthcat::ValidationError& e) {
    throw synthcat::ValidationError(flags.config + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partially synthetic categorical microdata via DPMPM"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* simulate = app.add_subcommand("simulate", "draw a dataset from a latent class model");
  AddCommonFlags(simulate, flags, true);
  auto* synthesize = app.add_subcommand("synthesize", "fit DPMPM and write m replicates");
  AddCommonFlags(synthesize, flags, false);
  auto* utility = app.add_subcommand("utility", "utility report for the replicates");
  AddCommonFlags(utility, flags, false);
  auto* risk = app.add_subcommand("risk", "disclosure risk report for the replicates");
  AddCommonFlags(risk, flags, false);
  auto* report = app.add_subcommand("report", "combine the manifest and reports");
  AddCommonFlags(report, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const synthcat::Logger log = [&](const std::string& line) {
    if (!flags.quiet) std::cerr << line << '\n';
  };
  try {
    if (simulate->parsed()) {
      synthcat::CmdSimulate(flags.config, flags.out, flags.seed, log);
    } else {
      const auto config = Load(flags);
      if (synthesize->parsed()) synthcat::CmdSynthesize(config, log);
      if (utility->parsed()) synthcat::CmdUtility(config, log);
      if (risk->parsed()) synthcat::CmdRisk(config, log);
      if (report->parsed()) synthcat::CmdReport(config, log);
    }
  } catch (const synthcat::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
