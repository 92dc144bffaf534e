#!/usr/bin/python
# -*- coding: utf-8 -*-

#  Copyright 2024 qbattery developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

from __future__ import absolute_import, division, print_function

__metaclass__ = type

DOCUMENTATION = """
---
module: qbattery_run
short_description: simulate one charger/battery configuration
description:
    - Integrates the master equation for one (n_b, r, temperature) point on a
      uniform sample grid, then continues to the steady state.
    - Reports the summary row (steady-state energy, capacity, peak power,
      entanglement, ergotropy) and optionally writes the trajectory CSV.
version_added: '1.0.0'
requirements:
    - numpy
    - scipy
    - voluptuous
notes:
    - C(temperature) and C(nbar) are mutually exclusive; neither means zero temperature.
options:
    n_b:
        description:
            - Number of battery spins.
        type: int
        required: true
    r:
        description:
            - Charger to battery ratio; the charger has r * n_b spins.
        type: int
        default: 1
    omega:
        description:
            - Spin transition frequency, in units of gamma.
        type: float
        default: 1.0
    gamma:
        description:
            - Collective damping rate; sets the time unit.
        type: float
        default: 1.0
    temperature:
        description:
            - Reservoir temperature in units of omega.
        type: float
    nbar:
        description:
            - Reservoir mean occupation, given directly.
        type: float
    t_end:
        description:
            - Length of the sampled trajectory, in units of 1/gamma.
        type: float
        default: 50.0
    sample_interval:
        description:
            - Spacing of the sample grid.
        type: float
        default: 0.01
    method:
        description:
            - Embedded Runge-Kutta pair used by the integrator.
        type: str
        default: DOP853
        choices: ['DOP853', 'RK45']
    ss_tolerance:
        description:
            - Frobenius norm of the generator residual at which the steady
              state is accepted.
        type: float
        default: 1e-10
    t_cap:
        description:
            - Integration time after the trajectory beyond which the
              steady-state search gives up.
        type: float
        default: 200.0
    dim_cap:
        description:
            - Largest joint dimension (n_c + 1)(n_b + 1) allowed.
        type: int
        default: 200
    out:
        description:
            - Path of the trajectory CSV to write.
        type: path
"""

EXAMPLES = """
- name: two spins at zero temperature
  command: qbattery run --n-b 1

- name: five battery spins, ratio 5, written to disk
  command: qbattery run --n-b 5 --r 5 --out traj.csv

- name: thermal reservoir given by its occupation
  command: qbattery run --n-b 1 --r 2 --nbar 1.0 -v
"""

RETURN = """
summary:
    description: The summary row of the point, plus solver diagnostics.
    returned: success
    type: dict
    sample: {"n_b": 1, "n_c": 1, "r": 1, "e_ss": 0.25, "converged": true}
samples:
    description: Number of trajectory samples.
    returned: success
    type: int
    sample: 5001
trajectory_file:
    description: Path of the written trajectory CSV.
    returned: when out is given
    type: str
    sample: "traj.csv"
"""

from qbattery.module_utils.errors import QBatteryError
from qbattery.module_utils.helper import QBatteryModule, get_simulation
from qbattery.module_utils.sweep import run_point, write_trajectory


def get_helper():
    return get_simulation(
        with_system=True,
        with_grid=True,
        with_steady_state=True,
        argument_spec=dict(
            out=dict(type="path", help="Trajectory CSV to write."),
        ),
    )


def main(argv=None):
    helper = get_helper()

    module = QBatteryModule(
        argument_spec=helper.argument_spec,
        mutually_exclusive=helper.mutually_exclusive,
        argv=argv,
        prog="qbattery run",
        description="Simulate one charger/battery configuration.",
    )

    helper.check_versions(module)
    spec = helper.get_system_spec(module)
    settings = helper.get_point_settings(module)

    try:
        records, row = run_point(
            spec.n_b,
            module.params["r"],
            temperature=spec.temperature,
            settings=settings,
            nbar=spec.nbar,
        )
    except QBatteryError as e:
        module.fail_json(msg="Failed to run point: {0}".format(e), code=e.code)

    if row.message:
        module.warn(row.message)
    if row.peak_flags:
        module.warn(
            "no interior maximum for {0}; boundary value reported".format(
                ", ".join(row.peak_flags)
            )
        )

    result = {"summary": row.as_dict(), "samples": len(records)}

    out = module.params["out"]
    if out:
        try:
            write_trajectory(out, records)
        except (IOError, OSError) as e:
            module.fail_json(msg="Failed to write {0}: {1}".format(out, e))
        result["trajectory_file"] = out

    module.exit_json(changed=bool(out), **result)


if __name__ == "__main__":
    main()
