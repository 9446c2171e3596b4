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
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "synthcat/config.hpp"
#include "synthcat/csv.hpp"
#include "synthcat/dpmpm.hpp"
#include "synthcat/error.hpp"
#include "synthcat/pipeline.hpp"
#include "synthcat/report.hpp"
#include "synthcat/risk.hpp"
#include "synthcat/simulate.hpp"
#include "synthcat/snapshot.hpp"
#include "synthcat/utility.hpp"

namespace py = pybind11;
using synthcat::CategoricalDataset;
using synthcat::Codebook;

namespace {

py::object ToPython(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Codebook CodebookFrom(const py::object& codebook) {
  const std::string text =
      py::str(py::module_::import("json").attr("dumps")(codebook));
  return synthcat::CodebookFromJson(nlohmann::json::parse(text));
}

CategoricalDataset MakeDataset(const py::object& codebook,
                               const std::vector<std::vector<std::string>>& rows,
                               std::optional<std::vector<std::string>> ids) {
  const Codebook cb = CodebookFrom(codebook);
  std::vector<std::string> record_ids;
  if (ids) {
    record_ids = *ids;
  } else {
    for (std::size_t i = 1; i <= rows.size(); ++i) {
      record_ids.push_back(std::to_string(i));
    }
  }
  return CategoricalDataset::Encode(cb, rows, record_ids);
}

synthcat::ClassRedraw ParseRedraw(const std::string& mode) {
  if (mode == "conditional") return synthcat::ClassRedraw::kConditional;
  if (mode == "prior") return synthcat::ClassRedraw::kPrior;
  throw synthcat::ValidationError("z_mode must be 'conditional' or 'prior'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Partially synthetic categorical data: DPMPM synthesis, utility and risk";

  py::register_exception<synthcat::ValidationError>(m, "ValidationError",
                                                    PyExc_ValueError);
  py::register_exception<synthcat::ComputationError>(m, "ComputationError",
                                                     PyExc_RuntimeError);

  py::class_<CategoricalDataset>(m, "Dataset")
      .def(py::init(&MakeDataset), py::arg("codebook"), py::arg("rows"),
           py::arg("ids") = py::none())
      .def_property_readonly("n_rows", &CategoricalDataset::rows)
      .def_property_readonly("n_cols", &CategoricalDataset::cols)
      .def_property_readonly("record_ids", &CategoricalDataset::record_ids)
      .def_property_readonly("variables",
                             [](const CategoricalDataset& d) {
                               std::vector<std::string> names;
                               for (const auto& v : d.codebook().variables()) {
                                 names.push_back(v.name);
                               }
                               return names;
                             })
      .def("codebook",
           [](const CategoricalDataset& d) {
             return ToPython(synthcat::CodebookToJson(d.codebook()));
           })
      .def("decode", &CategoricalDataset::Decode)
      .def("codes",
           [](const CategoricalDataset& d) {
             std::vector<std::vector<int>> out(d.rows());
             for (std::size_t i = 0; i < d.rows(); ++i) {
               out[i].assign(d.row(i).begin(), d.row(i).end());
             }
             return out;
           })
      .def("drop_incomplete", &synthcat::DropIncomplete)
      .def("__eq__", [](const CategoricalDataset& a, const CategoricalDataset& b) {
        return a == b;
      });

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const py::object& codebook,
         std::optional<std::string> id_column) {
        synthcat::CsvOptions opts;
        opts.id_column = std::move(id_column);
        return synthcat::LoadCsv(path, CodebookFrom(codebook), opts);
      },
      py::arg("path"), py::arg("codebook"), py::arg("id_column") = py::none());

  m.def(
      "save_csv",
      [](const std::filesystem::path& path, const CategoricalDataset& data,
         std::optional<std::string> id_column) {
        synthcat::CsvOptions opts;
        opts.id_column = std::move(id_column);
        synthcat::SaveCsv(path, data, opts);
      },
      py::arg("path"), py::arg("data"), py::arg("id_column") = py::none());

  m.def(
      "simulate",
      [](const py::object& spec) {
        const std::string text = py::str(py::module_::import("json").attr("dumps")(spec));
        return synthcat::Simulate(synthcat::SimSpecFromJson(nlohmann::json::parse(text)))
            .data;
      },
      py::arg("spec"), "Draw a dataset from a latent class model given as a dict.");

  m.def(
      "synthesize",
      [](const CategoricalDataset& data, const std::vector<std::string>& sensitive,
         int K, int nrun, int burn, int thin, int m_rep, std::uint64_t seed,
         double a_alpha, double b_alpha, const std::string& z_mode) {
        synthcat::DpmpmHyperparams h;
        h.classes = K;
        h.nrun = nrun;
        h.burn = burn;
        h.thin = thin;
        h.replicates = m_rep;
        h.seed = seed;
        h.a_alpha = a_alpha;
        h.b_alpha = b_alpha;
        synthcat::SynthesisOptions so;
        so.redraw = ParseRedraw(z_mode);
        const auto idx = data.codebook().IndicesOf(sensitive);
        py::gil_scoped_release release;
        return synthcat::GenerateReplicates(data, h, idx, so).datasets;
      },
      py::arg("data"), py::arg("sensitive"), py::arg("K") = 80,
      py::arg("nrun") = 10000, py::arg("burn") = 5000, py::arg("thin") = 10,
      py::arg("m") = 5, py::arg("seed") = 221, py::arg("a_alpha") = 0.25,
      py::arg("b_alpha") = 0.25, py::arg("z_mode") = "conditional",
      "Fit DPMPM and return m partially synthetic replicates.");

  m.def(
      "pmse",
      [](const CategoricalDataset& conf, const CategoricalDataset& syn,
         const std::string& model, std::uint64_t seed) {
        synthcat::PmseOptions o;
        if (model == "forest") {
          o.model = synthcat::PropensityModel::kForest;
        } else if (model != "logistic") {
          throw synthcat::ValidationError("model must be 'logistic' or 'forest'");
        }
        o.seed = seed;
        return synthcat::Pmse(conf, syn, o).score;
      },
      py::arg("confidential"), py::arg("synthetic"), py::arg("model") = "logistic",
      py::arg("seed") = 0);

  m.def(
      "mean_absolute_deviation",
      [](const CategoricalDataset& conf, const CategoricalDataset& syn, int t,
         const std::vector<std::string>& focus) {
        const auto idx = conf.codebook().IndicesOf(focus);
        return synthcat::MeanAbsoluteDeviation(conf, syn, t, idx);
      },
      py::arg("confidential"), py::arg("synthetic"), py::arg("t"),
      py::arg("focus") = std::vector<std::string>{});

  m.def(
      "combine_estimates",
      [](const std::vector<double>& q, const std::vector<double>& v, double level) {
        return ToPython(synthcat::ToJson(synthcat::CombineEstimates(q, v, level)));
      },
      py::arg("q"), py::arg("v"), py::arg("level") = 0.95);

  m.def(
      "interval_overlap",
      [](std::pair<double, double> c, std::pair<double, double> s) {
        return synthcat::IntervalOverlap({c.first, c.second}, {s.first, s.second});
      },
      py::arg("confidential"), py::arg("synthetic"));

  m.def(
      "match_risk",
      [](const CategoricalDataset& conf, const CategoricalDataset& syn,
         const std::vector<std::string>& known) {
        const auto idx = conf.codebook().IndicesOf(known);
        return ToPython(synthcat::ToJson(synthcat::MatchRisk(conf, syn, idx)));
      },
      py::arg("confidential"), py::arg("synthetic"), py::arg("known_vars"));

  m.def(
      "cap",
      [](const CategoricalDataset& conf, const CategoricalDataset& syn,
         const std::vector<std::string>& keys, const std::string& target,
         const std::string& mode) {
        const auto& cb = conf.codebook();
        const auto res = synthcat::Cap(
            conf, syn, cb.IndicesOf(keys), cb.IndexOf(target),
            mode == "zero" ? synthcat::CapUndefined::kZero
                           : synthcat::CapUndefined::kExclude);
        py::dict out;
        out["average"] = res.average ? py::cast(*res.average) : py::none();
        out["undefined_count"] = res.undefined_count;
        py::list per;
        for (const auto& v : res.per_record) {
          per.append(v ? py::cast(*v) : py::none());
        }
        out["per_record"] = per;
        return out;
      },
      py::arg("confidential"), py::arg("synthetic"), py::arg("keys"),
      py::arg("target"), py::arg("undefined_mode") = "exclude");

  m.def(
      "em_fellegi_sunter",
      [](const std::vector<std::vector<int>>& pairs) {
        const auto r = synthcat::EmFellegiSunter(
            synthcat::AgreementPatterns::FromPairs(pairs));
        py::dict out;
        out["m"] = r.m;
        out["u"] = r.u;
        out["prevalence"] = r.prevalence;
        out["log_likelihood_trace"] = r.log_likelihood_trace;
        out["converged"] = r.converged;
        out["degenerate"] = r.degenerate;
        return out;
      },
      py::arg("agreement"));

  m.def(
      "record_linkage",
      [](const CategoricalDataset& conf, const CategoricalDataset& syn,
         const std::vector<std::string>& keys, double threshold) {
        synthcat::LinkageOptions o;
        o.threshold = threshold;
        const auto idx = conf.codebook().IndicesOf(keys);
        return ToPython(synthcat::ToJson(synthcat::RecordLinkageRisk(conf, syn, idx, o)));
      },
      py::arg("confidential"), py::arg("synthetic"), py::arg("keys"),
      py::arg("threshold") = 0.0);

  m.def(
      "run",
      [](const std::string& command, const std::filesystem::path& config,
         std::optional<std::filesystem::path> out, std::optional<std::uint64_t> seed) {
        py::gil_scoped_release release;
        if (command == "simulate") {
          if (!out) throw synthcat::ValidationError("simulate needs an output directory");
          synthcat::CmdSimulate(config, *out, seed);
          return;
        }
        synthcat::ConfigOverrides o;
        o.seed = seed;
        o.output_dir = out;
        const auto cfg = synthcat::LoadConfig(config, o);
        if (command == "synthesize") {
          synthcat::CmdSynthesize(cfg);
        } else if (command == "utility") {
          synthcat::CmdUtility(cfg);
        } else if (command == "risk") {
          synthcat::CmdRisk(cfg);
        } else if (command == "report") {
          synthcat::CmdReport(cfg);
        } else {
          throw synthcat::ValidationError("unknown command '" + command + "'");
        }
      },
      py::arg("command"), py::arg("config"), py::arg("out") = py::none(),
      py::arg("seed") = py::none(),
      "Run a pipeline command: simulate, synthesize, utility, risk or report.");
}
