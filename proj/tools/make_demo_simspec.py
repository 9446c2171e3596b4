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
"""Writes configs/yrbs_simspec.json, a latent class model over the survey schema."""

import json
import pathlib

import numpy as np

SCHEMA = [
    ("City", ["NYC", "Chicago"], False),
    ("Age", [str(a) for a in range(12, 19)], False),
    ("Sex", ["Male", "Female"], False),
    ("Grade", ["9", "10", "11", "12"], False),
    ("Race", [f"R{r}" for r in range(1, 8)], False),
    ("Obesity", ["1", "2"], True),
    ("Sexuality", ["S1", "S2", "S3", "S4"], True),
    ("SexualViolence", ["1", "2"], True),
    ("Tobacco", ["1", "2"], True),
    ("Alcohol", ["1", "2"], True),
    ("Marijuana", ["1", "2"], True),
    ("Drug", ["1", "2"], True),
    ("SexualContact", ["1", "2"], True),
]


def main():
    rng = np.random.default_rng(2026)
    weights = [0.4, 0.3, 0.2, 0.1]
    variables = []
    for name, levels, sensitive in SCHEMA:
        table = rng.dirichlet(np.full(len(levels), 0.8), size=len(weights))
        table = np.round(table, 6)
        table[:, -1] = 1.0 - table[:, :-1].sum(axis=1)
        variables.append({
            "name": name,
            "levels": levels,
            "sensitive": sensitive,
            "kernels": [[float(f"{p:.6f}") for p in row] for row in table],
        })
    spec = {"n": 2000, "seed": 20191, "missing_rate": 0.01,
            "class_weights": weights, "variables": variables}
    out = pathlib.Path(__file__).resolve().parent.parent / "configs" / "yrbs_simspec.json"
    out.write_text(json.dumps(spec, indent=2) + "\n")


if __name__ == "__main__":
    main()
