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

import os
import pathlib

import numpy as np
import pytest

import qfilter

ROOT = pathlib.Path(os.environ.get("QFILTER_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))

P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)
ETA = np.array([[0.9, 0.1], [0.1, 0.9]])


def test_two_level_update():
    step = qfilter.MeasurementStep([P0, P1], ETA)
    rho, regularized = qfilter.filter_update(np.eye(2) / 2, step, 0)
    assert not regularized
    np.testing.assert_allclose(rho, np.diag([0.9, 0.1]), atol=1e-15)
    assert qfilter.outcome_probabilities(np.eye(2) / 2, step) == pytest.approx([0.5, 0.5])


def test_filter_matches_oracle():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    u, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    ops = [u @ np.diag(np.eye(3)[i]) for i in range(3)]
    eta = np.array([[0.7, 0.2, 0.1], [0.3, 0.8, 0.9]])
    step = qfilter.MeasurementStep(ops, eta)
    outcomes = [0, 1, 1, 0]
    states = qfilter.run_filter(rho, [step] * 4, outcomes)
    assert len(states) == 5
    direct = qfilter.direct_estimate(rho, [step] * 4, outcomes)
    assert np.max(np.abs(states[-1] - direct)) < 1e-9
    evidence = 1.0
    for k, p in enumerate(outcomes):
        evidence *= qfilter.outcome_probabilities(states[k], step)[p]
    assert qfilter.marginal_evidence(rho, [step] * 4, outcomes) == pytest.approx(evidence, rel=1e-10)


def test_fidelity_and_submartingale():
    a = np.diag([0.3, 0.7]).astype(complex)
    b = np.eye(2) / 2
    assert qfilter.fidelity(a, b) == pytest.approx((np.sqrt(0.15) + np.sqrt(0.35)) ** 2)
    step = qfilter.MeasurementStep([P0, P1], np.eye(2))
    check = qfilter.exact_one_step_submartingale(a, b, step)
    assert check["holds"]
    assert check["rhs"] == pytest.approx(1.0)


def test_errors_carry_kind():
    with pytest.raises(qfilter.QFilterError) as info:
        qfilter.MeasurementStep([P0, P1], np.array([[0.9, 0.1], [0.2, 0.9]]))
    assert info.value.args[0] == "ColumnSumDeviation"
    with pytest.raises(qfilter.QFilterError) as info:
        qfilter.validate_density(np.diag([0.7, 0.2]))
    assert info.value.args[0] == "TraceDeviation"


def test_photon_box():
    step = qfilter.photonbox.step({"n_max": 6}, 0.1 + 0.0j)
    assert step.dim == 7
    assert step.m_ideal == 21
    assert step.m_real == 6
    assert step.labels[0] == "(no,o)"
    eta = qfilter.photonbox.table1({"detection_efficiency": 0.8, "eta_g": 0.1, "eta_e": 0.15})
    np.testing.assert_allclose(eta.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(eta[:, 3], [0.2, 0.72, 0.08, 0, 0, 0], atol=1e-15)
    d = qfilter.photonbox.displacement(0.5, 10)
    psi = d[:, 0]
    assert np.sum(np.arange(11) * np.abs(psi) ** 2) == pytest.approx(0.25, abs=1e-6)
    with pytest.raises(qfilter.QFilterError):
        qfilter.photonbox.step({"nmax": 3})


def test_config_entry_points():
    report = qfilter.verify_config(ROOT / "configs" / "verify_small.json", ["model", "oracle", "ideal_limit"])
    assert report["passed"]
    summary = qfilter.simulate_config(ROOT / "configs" / "two_level.json", 50)
    assert summary["n_traj"] == 50
    assert sum(summary["first_outcome_counts"]) == 50
