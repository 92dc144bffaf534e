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
module: qbattery_oracle
short_description: print exact two-spin results
description:
    - Prints the closed-form results for one charger spin and one battery
      spin in the basis up-up, symmetric, antisymmetric, down-down.
    - Includes the equation-of-motion coefficient table, the steady state,
      the steady-state spin expectation and, optionally, the exact
      evolution of the diagonal and the symmetric/antisymmetric coherence.
version_added: '1.0.0'
requirements:
    - numpy
    - scipy
options:
    nbar:
        description:
            - Reservoir mean occupation.
        type: float
        default: 0.0
    rho33_initial:
        description:
            - Initial population of the antisymmetric (dark) state.
        type: float
        default: 0.5
    gamma:
        description:
            - Collective damping rate.
        type: float
        default: 1.0
    omega:
        description:
            - Spin transition frequency.
        type: float
        default: 1.0
    times:
        description:
            - Times at which to evaluate the exact evolution from charger up,
              battery down.
        type: list
        elements: float
"""

EXAMPLES = """
- name: zero temperature values
  command: qbattery oracle

- name: thermal reservoir with evolution samples
  command: qbattery oracle --nbar 1 --times 0.5 1 2
"""

RETURN = """
steady_state:
    description: Diagonal of the steady state, rho_11 to rho_44.
    returned: success
    type: list
    sample: [0.0, 0.0, 0.5, 0.5]
jz_expectation:
    description: Steady-state <J^z> of either spin, starting from charger up, battery down.
    returned: success
    type: float
    sample: -0.25
rates:
    description: Coefficients of d(rho_ij)/dt; complex values as [real, imag].
    returned: success
    type: dict
    sample: {"rho_11": {"rho_11": [-2.0, 0.0], "rho_22": [0.0, 0.0]}}
evolution:
    description: rho_11, rho_22, rho_33, rho_44 and rho_23 at each requested time.
    returned: when times is given
    type: list
    sample: [{"t": 1.0, "rho_22": 0.0677, "rho_44": 0.4323}]
"""

import numpy as np

from qbattery.module_utils import oracle
from qbattery.module_utils.errors import QBatteryError
from qbattery.module_utils.helper import QBatteryModule, get_simulation


def get_helper():
    return get_simulation(
        argument_spec=dict(
            nbar=dict(type="float", default=0.0, help="Reservoir mean occupation."),
            rho33_initial=dict(type="float", default=0.5, help="Initial dark-state population."),
            gamma=dict(type="float", default=1.0, help="Damping rate."),
            omega=dict(type="float", default=1.0, help="Transition frequency."),
            times=dict(type="list", elements="float", help="Evolution sample times."),
        ),
    )


def _label(ij):
    return "rho_{0}{1}".format(*ij)


def main(argv=None):
    helper = get_helper()

    module = QBatteryModule(
        argument_spec=helper.argument_spec,
        mutually_exclusive=helper.mutually_exclusive,
        argv=argv,
        prog="qbattery oracle",
        description="Print exact two-spin results.",
    )

    helper.check_versions(module)
    params = module.params

    try:
        table = oracle.two_spin_rate_matrix(params["nbar"], params["gamma"], params["omega"])
        rho_ss = oracle.two_spin_steady_state(params["nbar"], params["rho33_initial"])
        jz = oracle.two_spin_jz_expectation(params["nbar"])
    except QBatteryError as e:
        module.fail_json(msg=str(e), code=e.code)

    result = {
        "steady_state": np.real(np.diagonal(rho_ss)).tolist(),
        "jz_expectation": jz,
        "rates": dict(
            (
                _label(ij),
                dict((_label(kl), [complex(c).real, complex(c).imag]) for kl, c in terms.items()),
            )
            for ij, terms in table.items()
        ),
    }

    if params["times"]:
        rho0 = oracle.to_two_spin_basis(oracle.two_spin_initial_state())
        states = oracle.two_spin_evolution(
            params["nbar"], params["gamma"], params["omega"], rho0, params["times"]
        )
        result["evolution"] = [
            {
                "t": t,
                "rho_11": float(np.real(rho[0, 0])),
                "rho_22": float(np.real(rho[1, 1])),
                "rho_33": float(np.real(rho[2, 2])),
                "rho_44": float(np.real(rho[3, 3])),
                "rho_23": [float(np.real(rho[1, 2])), float(np.imag(rho[1, 2]))],
            }
            for t, rho in zip(params["times"], states)
        ]

    module.exit_json(**result)


if __name__ == "__main__":
    main()
