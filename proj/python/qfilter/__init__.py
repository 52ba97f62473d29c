# Copyright 2026 The qfilter Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quantum filtering with imperfect measurements."""

import json

from . import _core
from ._core import (
    MeasurementStep,
    QFilterError,
    direct_estimate,
    exact_one_step_submartingale,
    fidelity,
    filter_update,
    marginal_evidence,
    outcome_probabilities,
    run_filter,
    validate_density,
)

photonbox = _core.photonbox


def verify_config(path, checks=()):
    """Run verification checks on a config file and return the parsed report."""
    return json.loads(_core.verify_config(str(path), list(checks)))


def simulate_config(path, n_traj=0):
    """Simulate the ensemble described by a config file; returns the summary."""
    return json.loads(_core.simulate_config(str(path), n_traj))


__all__ = [
    "MeasurementStep",
    "QFilterError",
    "direct_estimate",
    "exact_one_step_submartingale",
    "fidelity",
    "filter_update",
    "marginal_evidence",
    "outcome_probabilities",
    "photonbox",
    "run_filter",
    "simulate_config",
    "validate_density",
    "verify_config",
]
