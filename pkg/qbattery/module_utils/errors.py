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

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import math

# List of simulator error codes and names.
_QBATTERY_ERROR_CODES = {
    "1": "Invalid Parameter",
    "2": "Dimension Mismatch",
    "3": "Step Size Underflow",
    "4": "Not Converged",
    "5": "Invalid Config",
    "6": "Sweep Point Failed",
    "7": "Missing Library",
}


class QBatteryError(Exception):
    """Exception representing a simulator error."""

    default_code = None

    def __init__(self, message=None, code=None):
        if code is None:
            code = self.default_code

        if code not in _QBATTERY_ERROR_CODES:
            self._code = "-1"
            msg = "Unspecified Error"
        else:
            self._code = code
            msg = "{0} ({1})".format(_QBATTERY_ERROR_CODES[code], code)

        if message:
            msg += ": {0}".format(message)

        self.detail = message
        super().__init__(msg)

    @property
    def code(self):
        """
        Returns the simulator error code for this error.
        """
        return self._code


class InvalidParameterError(QBatteryError, ValueError):
    default_code = "1"


class DimensionMismatchError(QBatteryError, ValueError):
    default_code = "2"


class StepSizeUnderflowError(QBatteryError):
    default_code = "3"


class NotConvergedError(QBatteryError):
    default_code = "4"


class ConfigError(QBatteryError, ValueError):
    default_code = "5"


class SweepPointError(QBatteryError):
    default_code = "6"


class MissingLibraryError(QBatteryError):
    default_code = "7"


def as_number(value, name="value"):
    """float(value), refusing anything that is not a finite number."""
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidParameterError("{0} must be a number, got {1!r}".format(name, value))
    if not math.isfinite(number):
        raise InvalidParameterError("{0} must be finite, got {1!r}".format(name, value))
    return number


def as_integer(value, name="value"):
    """int(value), refusing bools and anything that would round."""
    if isinstance(value, bool):
        raise InvalidParameterError("{0} must be an integer, got {1!r}".format(name, value))
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidParameterError("{0} must be an integer, got {1!r}".format(name, value))
    if not number.is_integer():
        raise InvalidParameterError("{0} must be an integer, got {1!r}".format(name, value))
    return int(number)
