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
module: qbattery_sweep
short_description: run a parameter sweep from a config file
description:
    - Runs every (n_b, r, temperature) point listed in a flat C(key = value)
      config file and writes one trajectory CSV per point plus
      C(summary.csv).
    - With two or more temperatures, also writes C(temperature_slope.csv);
      with three or more battery sizes at some ratio and temperature, also
      writes C(scaling_fit.csv).
version_added: '1.0.0'
requirements:
    - numpy
    - scipy
    - voluptuous
notes:
    - Points that fail are recorded with C(converged=false); the sweep continues.
    - Identical configs give byte-identical output files.
options:
    config:
        description:
            - Path of the sweep config file.
        type: path
        required: true
    out_dir:
        description:
            - Overrides C(out_dir) from the config file.
        type: path
    workers:
        description:
            - Overrides C(workers) from the config file.
        type: int
"""

EXAMPLES = """
- name: run the capacity sweep
  command: qbattery sweep --config tests/integration/capacity.cfg

- name: same sweep on four processes, elsewhere
  command: qbattery sweep --config tests/integration/capacity.cfg --workers 4 --out-dir /tmp/capacity
"""

RETURN = """
points:
    description: Number of sweep points.
    returned: success
    type: int
    sample: 12
failed:
    description: Points that did not converge, as (n_b, r, temperature, message).
    returned: success
    type: list
    sample: []
files:
    description: CSV files written, in order.
    returned: success
    type: list
    sample: ["out/trajectory_nb1_r5_T0.csv", "out/summary.csv"]
fits:
    description: Least-squares fits of p_max and sdot_max against n_b.
    returned: success
    type: list
    sample: [{"r": 5, "temperature": 0.0, "quantity": "p_max", "slope": 0.4, "intercept": 0.1, "r_squared": 0.999}]
"""

import dataclasses

from qbattery.module_utils.errors import QBatteryError
from qbattery.module_utils.helper import QBatteryModule, get_simulation
from qbattery.module_utils.sweep import load_config, run_sweep


def get_helper():
    return get_simulation(
        argument_spec=dict(
            config=dict(type="path", required=True, help="Sweep config file."),
            out_dir=dict(type="path", help="Output directory override."),
            workers=dict(type="int", help="Worker process override."),
        ),
    )


def main(argv=None):
    helper = get_helper()

    module = QBatteryModule(
        argument_spec=helper.argument_spec,
        mutually_exclusive=helper.mutually_exclusive,
        argv=argv,
        prog="qbattery sweep",
        description="Run a parameter sweep from a config file.",
    )

    helper.check_versions(module)

    try:
        config = load_config(module.params["config"])
    except QBatteryError as e:
        module.fail_json(msg="Invalid sweep config: {0}".format(e), code=e.code)

    overrides = {}
    if module.params["out_dir"]:
        overrides["out_dir"] = module.params["out_dir"]
    if module.params["workers"] is not None:
        if module.params["workers"] < 1:
            module.fail_json(msg="workers must be >= 1")
        overrides["workers"] = module.params["workers"]
    if overrides:
        config = dataclasses.replace(config, **overrides)

    try:
        result = run_sweep(config)
    except (IOError, OSError) as e:
        module.fail_json(msg="Failed to write sweep output: {0}".format(e))

    failed = [[row.n_b, row.r, row.temperature, row.message] for row in result.failed]
    if failed:
        module.warn("{0} of {1} points did not converge".format(len(failed), len(result.rows)))

    module.exit_json(
        changed=True,
        points=len(result.rows),
        failed=failed,
        files=result.files,
        fits=result.fits,
    )


if __name__ == "__main__":
    main()
