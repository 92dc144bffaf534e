# Copyright 2024 qbattery developers
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR
# ANY SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF
# OR IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import numpy as np
import pytest

from qbattery.module_utils import oracle, selftest
from qbattery.module_utils.dynamics import SteadyStateResult
from qbattery.module_utils.errors import NotConvergedError
from qbattery.module_utils.selftest import CHECKS, run_checks, trace_distance


def test_trace_distance():
    up = oracle.two_spin_projector("up")
    down = oracle.two_spin_projector("down")

    assert trace_distance(up, up) == pytest.approx(0.0)
    assert trace_distance(up, down) == pytest.approx(1.0)
    assert trace_distance(up, 0.5 * (up + down)) == pytest.approx(0.5)


@pytest.mark.parametrize("name", list(CHECKS))
def test_check_passes(name):
    passed, detail = CHECKS[name]()

    assert passed, detail


def test_run_checks_all():
    results = run_checks()

    assert [r["name"] for r in results] == list(CHECKS)
    assert all(r["passed"] for r in results)
    assert all(r["elapsed"] >= 0 for r in results)


def test_run_checks_subset():
    results = run_checks(["negativity"])

    assert len(results) == 1
    assert results[0]["name"] == "negativity"
    assert "dark 1" in results[0]["detail"]


def test_run_checks_reports_errors(mocker):
    def broken():
        raise NotConvergedError("no steady state")

    mocker.patch.dict(selftest.CHECKS, {"dark_state": broken})

    result = run_checks(["dark_state"])[0]

    assert not result["passed"]
    assert result["detail"] == "Not Converged (4): no steady state"


def test_run_checks_reports_failure(mocker):
    mocker.patch.dict(selftest.CHECKS, {"dark_state": lambda: (np.bool_(False), "bad")})

    result = run_checks(["dark_state"])[0]

    assert result["passed"] is False
    assert result["detail"] == "bad"


def test_registry_covers_invariants():
    for name in (
        "omega_invariance",
        "negativity_side",
        "power_finite_difference",
        "steady_state_fixed_point",
    ):
        assert name in CHECKS


def test_unconverged_steady_state_fails_check(mocker):
    stuck = SteadyStateResult(
        rho_ss=oracle.two_spin_initial_state(),
        residual=0.1,
        elapsed_time=200.0,
        converged=False,
        message="residual 0.1 above tolerance 1e-10 at t_cap",
    )
    mocker.patch.object(selftest, "steady_state", return_value=stuck)

    result = run_checks(["steady_state_fixed_point"])[0]

    assert not result["passed"]
    assert result["detail"].startswith("Not Converged (4)")
    assert "t_cap" in result["detail"]
