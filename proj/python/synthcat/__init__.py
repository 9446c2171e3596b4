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
"""Partially synthetic categorical data: DPMPM synthesis, utility and risk."""

from synthcat._core import (
    ComputationError,
    Dataset,
    ValidationError,
    cap,
    combine_estimates,
    em_fellegi_sunter,
    interval_overlap,
    load_csv,
    match_risk,
    mean_absolute_deviation,
    pmse,
    record_linkage,
    run,
    save_csv,
    simulate,
    synthesize,
)

__all__ = [
    "ComputationError",
    "Dataset",
    "ValidationError",
    "cap",
    "combine_estimates",
    "em_fellegi_sunter",
    "interval_overlap",
    "load_csv",
    "match_risk",
    "mean_absolute_deviation",
    "pmse",
    "record_linkage",
    "run",
    "save_csv",
    "simulate",
    "synthesize",
]
