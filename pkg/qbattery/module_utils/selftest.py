# Copyright (c) 2024 qbattery developers
#
# Redistribution and use in source and binary forms, with or without modification,
# are permitted provided that the following conditions are met:
#
#    * Redistributions of source code must retain the above copyright
#      notice, this list of conditions and the following disclaimer.
#    * Redistributions in binary form must reproduce the above copyright notice,
#      this list of conditions and the following disclaimer in the documentation
#      and/or other materials provided with the distribution.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS" AND
# ANY EXPRESS OR IMPLIED WARRANTIES ARE DISCLAIMED. IN NO EVENT SHALL THE
# COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE FOR ANY DAMAGES ARISING IN ANY WAY
# OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Built-in invariant checks run by the ``selftest`` verb.

Each check returns ``(passed, detail)``.  The two-spin checks compare the
numeric pipeline against the hand-written oracle.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import logging
import time
from collections import OrderedDict

import numpy as np

from qbattery.module_utils import observables, oracle
from qbattery.module_utils.dynamics import evolve, initial_state, steady_state
from qbattery.module_utils.errors import QBatteryError
from qbattery.module_utils.lindblad import SystemSpec, build_generator
from qbattery.module_utils.spinops import (
    build_collective_ops,
    commutator,
    embed_joint,
    matrices_close,
)

logger = logging.getLogger(__name__)

_TWO_SPIN_NBARS = (0.0, 0.1, 1.0, 10.0)


def trace_distance(a, b):
    """Half the trace norm of a - b."""
    diff = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


def check_spin_algebra():
    worst = 0.0
    for n in range(1, 9):
        ops = build_collective_ops(n)
        worst = max(
            worst,
            float(np.max(np.abs(commutator(ops.jz, ops.jplus) - ops.jplus))),
            float(np.max(np.abs(commutator(ops.jplus, ops.jminus) - 2 * ops.jz))),
        )
    return worst < 1e-12, "max su(2) deviation {0:.3g}".format(worst)


def check_joint_commutation():
    joint = embed_joint(build_collective_ops(3), build_collective_ops(2))
    ok = all(
        matrices_close(commutator(a, b), np.zeros_like(a), 1e-12)
        for a in (joint.jz_c, joint.jplus_c, joint.jminus_c)
        for b in (joint.jz_b, joint.jplus_b, joint.jminus_b)
    )
    return ok, "charger and battery operators commute"


def check_generator_form():
    gen = build_generator(SystemSpec(n_b=2, n_c=4, nbar=0.7))
    rng = np.random.default_rng(7)
    a = rng.normal(size=(gen.dim, gen.dim)) + 1j * rng.normal(size=(gen.dim, gen.dim))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    out = gen.apply(rho)
    trace = abs(np.trace(out))
    herm = float(np.max(np.abs(out - out.conj().T)))
    return trace < 1e-12 and herm < 1e-12, "trace {0:.3g}, hermiticity {1:.3g}".format(
        trace, herm
    )


def check_dark_state():
    gen = build_generator(SystemSpec(n_b=1, n_c=1, temperature=0.0))
    norm = float(np.linalg.norm(gen.apply(oracle.two_spin_projector("minus"))))
    return norm < 1e-12, "dark state residual {0:.3g}".format(norm)


def check_generator_against_oracle():
    worst = 0.0
    for nbar in _TWO_SPIN_NBARS:
        gen = build_generator(SystemSpec(n_b=1, n_c=1, omega=1.3, nbar=nbar))
        numeric = oracle.superoperator_to_two_spin_basis(gen.superoperator())
        exact = oracle.two_spin_superoperator(nbar, gamma=1.0, omega=1.3)
        worst = max(worst, float(np.max(np.abs(numeric - exact))))
    return worst < 1e-12, "max coefficient deviation {0:.3g}".format(worst)


def check_two_spin_steady_state():
    worst = 0.0
    for nbar in _TWO_SPIN_NBARS:
        spec = SystemSpec(n_b=1, n_c=1, nbar=nbar)
        gen = build_generator(spec)
        result = steady_state(gen, oracle.two_spin_initial_state())
        result.raise_for_status()
        exact = oracle.from_two_spin_basis(oracle.two_spin_steady_state(nbar, 0.5))
        worst = max(worst, trace_distance(result.rho_ss, exact))
    return worst < 1e-6, "max trace distance {0:.3g}".format(worst)


def check_negativity():
    spec = SystemSpec(n_b=1, n_c=1)
    dark = observables.log_negativity(oracle.two_spin_projector("minus"), spec)
    mixed = observables.log_negativity(
        oracle.from_two_spin_basis(oracle.two_spin_steady_state(0.0, 0.5)), spec
    )
    expected = np.log2((1.0 + np.sqrt(2.0)) / 2.0)
    ok = abs(dark - 1.0) < 1e-10 and abs(mixed - expected) < 1e-9
    return ok, "dark {0:.12g}, two-spin steady state {1:.12g}".format(dark, mixed)


def check_trajectory_health():
    spec = SystemSpec(n_b=2, n_c=4, temperature=2.0)
    trajectory = evolve(build_generator(spec), initial_state(spec), 5.0, 0.05)
    trajectory.raise_for_status()
    drift = float(np.max(trajectory.trace_errors))
    min_eig = float(np.nanmin(trajectory.min_eigenvalues))
    return drift < 1e-9 and min_eig > -1e-8, "trace drift {0:.3g}, min eigenvalue {1:.3g}".format(
        drift, min_eig
    )


def check_omega_invariance():
    series = []
    for omega in (0.5, 1.0, 5.0):
        spec = SystemSpec(n_b=2, n_c=4, omega=omega, nbar=0.3)
        gen = build_generator(spec)
        trajectory = evolve(
            gen,
            initial_state(spec),
            5.0,
            0.1,
            keep_states=False,
            observer=observables.Observer(gen),
        )
        trajectory.raise_for_status()
        series.append(np.array(trajectory.observations)[:, 1:])
    worst = max(float(np.max(np.abs(other - series[0]))) for other in series[1:])
    return worst < 1e-8, "max deviation across omega {0:.3g}".format(worst)


def check_negativity_side():
    spec = SystemSpec(n_b=2, n_c=3, temperature=0.3)
    trajectory = evolve(build_generator(spec), initial_state(spec), 2.0, 0.5)
    trajectory.raise_for_status()
    worst = max(
        abs(
            observables.log_negativity(rho, spec, side=observables.CHARGER)
            - observables.log_negativity(rho, spec, side=observables.BATTERY)
        )
        for rho in trajectory.states
    )
    return worst < 1e-10, "max side difference {0:.3g}".format(worst)


def check_power_finite_difference():
    spec = SystemSpec(n_b=2, n_c=4, temperature=0.5)
    gen = build_generator(spec)
    dt = 1e-3
    trajectory = evolve(gen, initial_state(spec), 0.5, dt)
    trajectory.raise_for_status()
    e_b = [observables.energy_density(rho, observables.BATTERY, spec) for rho in trajectory.states]
    worst = 0.0
    for k in (100, 250, 400):
        slope = (e_b[k + 1] - e_b[k - 1]) / (2 * dt)
        worst = max(worst, abs(observables.power_density(gen, trajectory.states[k]) - slope))
    return worst < 1e-5, "max power deviation {0:.3g}".format(worst)


def check_steady_state_fixed_point():
    spec = SystemSpec(n_b=2, n_c=4, temperature=0.5)
    gen = build_generator(spec)
    first = steady_state(gen, initial_state(spec))
    first.raise_for_status()
    again = steady_state(gen, first.rho_ss, t_start=first.elapsed_time)
    ok = again.converged and again.elapsed_time == first.elapsed_time
    return ok, "residual {0:.3g} at t={1:.6g}".format(again.residual, again.elapsed_time)


CHECKS = OrderedDict(
    [
        ("spin_algebra", check_spin_algebra),
        ("joint_commutation", check_joint_commutation),
        ("generator_form", check_generator_form),
        ("dark_state", check_dark_state),
        ("generator_oracle", check_generator_against_oracle),
        ("two_spin_steady_state", check_two_spin_steady_state),
        ("negativity", check_negativity),
        ("trajectory_health", check_trajectory_health),
        ("omega_invariance", check_omega_invariance),
        ("negativity_side", check_negativity_side),
        ("power_finite_difference", check_power_finite_difference),
        ("steady_state_fixed_point", check_steady_state_fixed_point),
    ]
)


def run_checks(names=None):
    """Runs the named checks (all by default) and returns one dict per check."""
    results = []
    for name in names or list(CHECKS):
        start = time.time()
        try:
            passed, detail = CHECKS[name]()
        except QBatteryError as e:
            passed, detail = False, str(e)
        elapsed = time.time() - start
        if passed:
            logger.info("check %s passed (%.2fs): %s", name, elapsed, detail)
        else:
            logger.error("check %s failed: %s", name, detail)
        results.append(
            OrderedDict(
                [
                    ("name", name),
                    ("passed", bool(passed)),
                    ("detail", detail),
                    ("elapsed", elapsed),
                ]
            )
        )
    return results
