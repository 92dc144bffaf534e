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

"""``qbattery`` console script.

Usage: qbattery {run,sweep,oracle,selftest} [options]
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import importlib
import sys

from qbattery.module_utils.helper import version_string

VERBS = {
    "run": "qbattery.modules.qbattery_run",
    "sweep": "qbattery.modules.qbattery_sweep",
    "oracle": "qbattery.modules.qbattery_oracle",
    "selftest": "qbattery.modules.qbattery_selftest",
}

USAGE = "usage: qbattery {{{0}}} [options]\n       qbattery --version\n".format(
    ",".join(sorted(VERBS))
)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)

    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(USAGE)
        return 0 if argv else 2
    if argv[0] == "--version":
        print(version_string())
        return 0
    if argv[0] not in VERBS:
        sys.stderr.write("qbattery: unknown verb {0!r}\n{1}".format(argv[0], USAGE))
        return 2

    module = importlib.import_module(VERBS[argv[0]])
    # Verbs leave through exit_json() / fail_json().
    module.main(argv[1:])
    return 0


if __name__ == "__main__":
    sys.exit(main())
