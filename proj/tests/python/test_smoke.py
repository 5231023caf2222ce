# Copyright 2026 The partial_cs Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import numpy as np
import pytest

import partial_cs as pcs


def test_recover_planted_signal():
    a = pcs.gaussian_matrix(16, 24, seed=5)
    x1, x2 = pcs.planted_signal(24, 4, 2, seed=5, stream=1)
    x = np.concatenate([x1, x2])
    out = pcs.recover(a, 2, a @ x)
    assert np.max(np.abs(out["x"] - x)) < 1e-6
    assert out["route"] == "projected"
    assert out["x1_report"]["status"] == "Converged"


def test_simplex_and_splitting_agree():
    a = pcs.gaussian_matrix(8, 16, seed=3)
    y = a @ np.where(np.arange(16) < 2, 1.0, 0.0)
    exact = pcs.solve_l1(a, y)
    admm = pcs.solve_l1(a, y, method="splitting", max_iters=100000, abs_tol=1e-10,
                        rel_tol=1e-10, adaptive_penalty=True)
    assert abs(exact["objective"] - admm["objective"]) <= 1e-5 * exact["objective"]


def test_certificates_on_identity():
    eye = np.eye(5)
    assert pcs.rip_constant(eye, 3)["delta"] == 0.0
    nsp = pcs.nsp_check(eye, 2)
    assert nsp["holds"] and nsp["witness_v"] is None
    bad = pcs.nsp_check(np.array([[1.0, -1.0]]), 1)
    assert not bad["holds"]
    assert len(bad["witness_v"]) == 2


def test_sample_bound():
    assert pcs.gaussian_sample_bound(104, 5, 4, 0.5) == pytest.approx(3301.6995, abs=1e-3)


def test_errors_carry_kind():
    with pytest.raises(pcs.PcsError) as info:
        pcs.solve_l1(np.ones((2, 2)), np.array([1.0, 2.0]))
    assert info.value.args[0] == "Infeasible"
    with pytest.raises(pcs.PcsError):
        pcs.phase_diagram("n = 10\nbogus = 1\n")


def test_phase_diagram_is_reproducible():
    cfg = "n = 12\nk = 8\ns = 2\nr = 0, 1\ntrials = 3\nseed = 9\n"
    first = pcs.phase_diagram(cfg)
    assert first == pcs.phase_diagram(cfg, {"threads": "2"})
    assert first.splitlines()[0].startswith("k,n,s,r,eta")
    assert len(first.splitlines()) == 3
