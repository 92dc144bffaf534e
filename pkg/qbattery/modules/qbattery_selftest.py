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
module: qbattery_selftest
short_description: run the built-in invariant checks
description:
    - Checks the spin algebra, the form of the generator, dark-state
      stationarity, agreement of the two-spin generator and steady states
      with the exact results, the negativity reference values, the
      health of a short trajectory, frequency invariance, negativity
      side symmetry, power against a finite difference of the energy and
      the steady state as a fixed point.
version_added: '1.0.0'
requirements:
    - numpy
    - scipy
options:
    checks:
        description:
            - Names of the checks to run; all of them by default.
        type: list
        elements: str
        choices: ['spin_algebra', 'joint_commutation', 'generator_form', 'dark_state',
                  'generator_oracle', 'two_spin_steady_state', 'negativity',
                  'trajectory_health', 'omega_invariance', 'negativity_side',
                  'power_finite_difference', 'steady_state_fixed_point']
"""

EXAMPLES = """
- name: everything
  command: qbattery selftest

- name: just the exact two-spin comparisons
  command: qbattery selftest --checks generator_oracle two_spin_steady_state
"""

RETURN = """
passed:
    description: Whether every check passed.
    returned: always
    type: bool
    sample: true
checks:
    description: One entry per check with name, passed, detail and elapsed seconds.
    returned: always
    type: list
    sample: [{"name": "dark_state", "passed": true, "detail": "dark state residual 0", "elapsed": 0.01}]
"""

from qbattery.module_utils.helper import QBatteryModule, get_simulation
from qbattery.module_utils.selftest import CHECKS, run_checks


def get_helper():
    return get_simulation(
        argument_spec=dict(
            checks=dict(
                type="list",
                elements="str",
                choices=list(CHECKS),
                help="Checks to run.",
            ),
        ),
    )


def main(argv=None):
    helper = get_helper()

    module = QBatteryModule(
        argument_spec=helper.argument_spec,
        mutually_exclusive=helper.mutually_exclusive,
        argv=argv,
        prog="qbattery selftest",
        description="Run the built-in invariant checks.",
    )

    helper.check_versions(module)

    checks = run_checks(module.params["checks"])
    failed = [c["name"] for c in checks if not c["passed"]]

    if failed:
        module.fail_json(
            msg="Failed checks: {0}".format(", ".join(failed)),
            passed=False,
            checks=checks,
        )

    module.exit_json(passed=True, checks=checks)


if __name__ == "__main__":
    main()
