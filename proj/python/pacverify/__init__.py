# Copyright 2026 The pacverify Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Simulator for interactive PAC verification protocols."""

import json

from ._core import (
    Error,
    InvalidArgument,
    ParseError,
    SampleTooSmall,
    SpecError,
    erm_intervals,
    exact_tv,
    no_collision_probability,
    required_samples,
    tolerant_identity_test,
    wilson_interval,
)
from . import _core

__all__ = [
    "Error",
    "InvalidArgument",
    "ParseError",
    "SampleTooSmall",
    "SpecError",
    "erm_intervals",
    "exact_tv",
    "no_collision_probability",
    "replay",
    "required_samples",
    "run_experiment",
    "tolerant_identity_test",
    "wilson_interval",
]


def run_experiment(spec, workers=1):
    """Runs an experiment spec (a dict) and returns (report dict, csv text)."""
    report, csv = _core._run_experiment(json.dumps(spec), workers)
    return json.loads(report), csv


def replay(jsonl, resimulate=False):
    """Reclassifies a transcript log; see the `replay` CLI subcommand."""
    return json.loads(_core._replay(jsonl, resimulate))
