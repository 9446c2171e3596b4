# Copyright 2026 The synthcat Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoke tests for the Python bindings and the command-line tool."""

import json
import os
import pathlib
import subprocess

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

import synthcat

SOURCE_DIR = pathlib.Path(os.environ.get("SYNTHCAT_SOURCE_DIR", pathlib.Path(__file__).parents[2]))
CLI = os.environ.get("SYNTHCAT_CLI")

CODEBOOK = {
    "variables": [
        {"name": "Sex", "levels": ["M", "F"], "sensitive": False},
        {"name": "Grade", "levels": ["9", "10", "11"], "sensitive": False},
        {"name": "Smoke", "levels": ["No", "Yes"], "sensitive": True},
    ]
}


def small_spec(n=400, seed=3):
    return {
        "n": n,
        "seed": seed,
        "class_weights": [0.6, 0.4],
        "variables": [
            {"name": "Sex", "levels": ["M", "F"], "sensitive": False,
             "kernels": [[0.8, 0.2], [0.3, 0.7]]},
            {"name": "Grade", "levels": ["9", "10", "11"], "sensitive": False,
             "kernels": [[0.6, 0.3, 0.1], [0.1, 0.3, 0.6]]},
            {"name": "Smoke", "levels": ["No", "Yes"], "sensitive": True,
             "kernels": [[0.9, 0.1], [0.2, 0.8]]},
        ],
    }


def test_dataset_round_trip(tmp_path):
    rows = [["M", "9", "No"], ["F", "11", "Yes"], ["F", "10", "No"], ["M", "9", "Yes"]]
    d = synthcat.Dataset(CODEBOOK, rows)
    assert (d.n_rows, d.n_cols) == (4, 3)
    assert d.decode() == rows
    assert d.codes()[1] == [2, 3, 2]
    assert d.record_ids == ["1", "2", "3", "4"]
    path = tmp_path / "d.csv"
    synthcat.save_csv(str(path), d, id_column="id")
    assert synthcat.load_csv(str(path), CODEBOOK, id_column="id") == d


def test_unknown_label_is_rejected():
    with pytest.raises(synthcat.ValidationError, match="Other"):
        synthcat.Dataset(CODEBOOK, [["M", "9", "Other"]])


def test_synthesis_keeps_unsynthesized_columns():
    data = synthcat.simulate(small_spec())
    reps = synthcat.synthesize(data, ["Smoke"], K=5, nrun=200, burn=100, thin=10, m=2, seed=1)
    assert len(reps) == 2
    for rep in reps:
        assert [r[:2] for r in rep.codes()] == [r[:2] for r in data.codes()]
    again = synthcat.synthesize(data, ["Smoke"], K=5, nrun=200, burn=100, thin=10, m=2, seed=1)
    assert reps[0] == again[0]
    with pytest.raises(synthcat.ValidationError):
        synthcat.synthesize(data, ["Smoke"], K=5, nrun=200, burn=100, thin=10, m=50, seed=1)


def test_metric_bindings():
    data = synthcat.simulate(small_spec())
    assert synthcat.pmse(data, data) == pytest.approx(0.0, abs=1e-12)
    assert synthcat.mean_absolute_deviation(data, data, 2) == 0.0
    assert synthcat.interval_overlap((0, 2), (1, 3)) == 0.5
    comb = synthcat.combine_estimates([0.80, 0.82], [1e-4, 1e-4])
    assert comb["q_bar"] == pytest.approx(0.81)
    assert comb["total_variance"] == pytest.approx(2e-4)
    risk = synthcat.match_risk(data, data, ["Sex", "Grade", "Smoke"])
    assert risk["true_match_rate"] <= 1.0
    cap = synthcat.cap(data, data, ["Sex", "Grade"], "Smoke")
    assert 0.0 <= cap["average"] <= 1.0
    em = synthcat.em_fellegi_sunter([[1, 1]] * 10 + [[0, 0]] * 90)
    assert em["prevalence"] == pytest.approx(0.1, abs=1e-6)


def schema_validator(name):
    schemas = [json.loads(p.read_text()) for p in (SOURCE_DIR / "schemas").glob("*.schema.json")]
    registry = Registry().with_resources(
        [(s["$id"], Resource.from_contents(s)) for s in schemas])
    schema = json.loads((SOURCE_DIR / "schemas" / f"{name}.schema.json").read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema, registry=registry)


def write_config(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(small_spec()))
    config = {
        "input": str(tmp_path / "sim" / "simulated.csv"),
        "csv": {"id_column": "record_id"},
        "codebook": str(tmp_path / "sim" / "codebook.json"),
        "output_dir": str(tmp_path / "run"),
        "sampler": {"K": 5, "nrun": 200, "burn": 100, "thin": 10, "m": 2, "seed": 9},
        "utility": {"estimands": [{"variable": "Smoke", "level": "Yes"}],
                    "regressions": [{"target": "Smoke", "positive_level": "Yes",
                                     "predictors": ["Sex", "Grade"]}]},
        "risk": {"known_vars": ["Sex", "Grade", "Smoke"],
                 "cap": {"keys": ["Sex", "Grade"], "target": "Smoke"},
                 "classification": {"target": "Smoke", "predictors": ["Sex", "Grade"],
                                    "n_trees": 20}},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return spec, path


def test_python_run_matches_schemas(tmp_path):
    spec, config = write_config(tmp_path)
    synthcat.run("simulate", str(spec), out=str(tmp_path / "sim"))
    for command in ("synthesize", "utility", "risk", "report"):
        synthcat.run(command, str(config))
    run = tmp_path / "run"
    for name in ("manifest", "utility_report", "risk_report", "report"):
        schema_validator(name).validate(json.loads((run / f"{name}.json").read_text()))
    report = json.loads((run / "report.json").read_text())
    baseline = report["risk"]["match"]["baseline"]
    assert baseline["expected_match_risk"] > 0


@pytest.mark.skipif(CLI is None, reason="command-line tool not built")
def test_cli_exit_codes(tmp_path):
    spec, config = write_config(tmp_path)
    assert subprocess.run([CLI, "simulate", "--config", str(spec), "--out",
                           str(tmp_path / "sim"), "--quiet"]).returncode == 0
    assert subprocess.run([CLI, "synthesize", "--config", str(config), "--quiet"]).returncode == 0
    bad = json.loads(config.read_text())
    del bad["sampler"]["seed"]
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(bad))
    result = subprocess.run([CLI, "synthesize", "--config", str(bad_path)],
                            capture_output=True, text=True)
    assert result.returncode == 1
    assert "sampler.seed" in result.stderr
