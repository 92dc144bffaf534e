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

import argparse
import importlib
import json
import logging
import re
import sys

from voluptuous import (
    All,
    Any,
    Boolean,
    Coerce,
    In,
    Invalid,
    Length,
    MultipleInvalid,
    Optional,
    PREVENT_EXTRA,
    Required,
    Schema,
)

from qbattery import __version__
from qbattery.module_utils.errors import MissingLibraryError, QBatteryError
from qbattery.module_utils.lindblad import SystemSpec
from qbattery.module_utils.sweep import (
    DEFAULT_DIM_CAP,
    DEFAULT_SAMPLE_INTERVAL,
    DEFAULT_T_END,
    PointSettings,
    integer,
    number,
)
from qbattery.module_utils.dynamics import (
    DEFAULT_SS_TOLERANCE,
    DEFAULT_T_CAP,
    INTEGRATORS,
)

_MIN_VERSION_ERROR = "{0} version ({1}) < minimum version ({2})"

MIN_NUMPY_VERSION = (1, 21, 0)
MIN_SCIPY_VERSION = (1, 7, 0)

# Params for the next QBatteryModule, bypassing argv.  Set by the unit test harness.
_QBATTERY_ARGS = None

_LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"


def _vstr(val):
    return "{0}.{1}.{2}".format(*val)


def _version_tuple(text):
    parts = []
    for piece in text.split(".")[:3]:
        match = re.match(r"\d+", piece)
        parts.append(int(match.group(0)) if match else 0)
    while len(parts) < 3:
        parts.append(0)
    return tuple(parts)


def configure_logging(verbosity):
    """No flag is WARNING, -v is INFO, -vv and above DEBUG.  Logs go to stderr."""
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    root = logging.getLogger("qbattery")
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        root.addHandler(handler)
    return level


def _element_validator(kind):
    if kind == "int":
        return integer
    if kind == "float":
        return number
    if kind == "bool":
        return Boolean()
    return Coerce(str)


def build_schema(argument_spec):
    """Voluptuous schema equivalent to an ``argument_spec``."""
    schema = {}
    for name, opts in argument_spec.items():
        kind = opts.get("type", "str")
        if kind == "list":
            validator = All([_element_validator(opts.get("elements", "str"))], Length(min=1))
        else:
            validator = _element_validator(kind)

        if "choices" in opts:
            if kind == "list":
                validator = All(validator, [In(opts["choices"])])
            else:
                validator = All(validator, In(opts["choices"]))

        if opts.get("required", False):
            schema[Required(name)] = validator
        else:
            default = opts.get("default")
            if default is None:
                validator = Any(None, validator)
            schema[Optional(name, default=default)] = validator

    return Schema(schema, extra=PREVENT_EXTRA)


def build_parser(argument_spec, prog=None, description=None):
    """Argparse parser for an ``argument_spec``.

    Defaults are left to the schema so that absent params can be told apart.
    """
    parser = argparse.ArgumentParser(prog=prog, description=description)
    for name, opts in argument_spec.items():
        flag = "--{0}".format(name.replace("_", "-"))
        kwargs = {"dest": name, "default": argparse.SUPPRESS, "help": opts.get("help")}
        kind = opts.get("type", "str")
        if kind == "bool":
            kwargs["action"] = "store_true"
        elif kind == "list":
            kwargs["nargs"] = "+"
            kwargs["metavar"] = name.upper()
        else:
            kwargs["metavar"] = name.upper()
            if "choices" in opts:
                kwargs["choices"] = opts["choices"]
        parser.add_argument(flag, **kwargs)
    parser.add_argument(
        "-v",
        "--verbose",
        dest="_verbosity",
        action="count",
        default=0,
        help="Increase log verbosity (repeatable).",
    )
    return parser


class QBatteryModule(object):
    """Parameter handling and result reporting for one CLI verb.

    Params come from ``argv`` (or ``_QBATTERY_ARGS`` when set), are validated
    against a schema generated from ``argument_spec``, and are available as
    ``self.params``.  Results are printed as a JSON document on stdout.
    """

    def __init__(
        self,
        argument_spec,
        mutually_exclusive=None,
        argv=None,
        prog=None,
        description=None,
    ):
        self.argument_spec = argument_spec
        self.mutually_exclusive = mutually_exclusive or []
        self.warnings = []
        self.verbosity = 0

        if _QBATTERY_ARGS is not None:
            raw = dict(_QBATTERY_ARGS)
            self.verbosity = int(raw.pop("_verbosity", 0))
        else:
            parser = build_parser(argument_spec, prog=prog, description=description)
            raw = vars(parser.parse_args(argv))
            self.verbosity = raw.pop("_verbosity", 0)

        configure_logging(self.verbosity)

        try:
            self.params = build_schema(argument_spec)(raw)
        except MultipleInvalid as e:
            self.params = {}
            self.fail_json(msg="; ".join(_describe(err) for err in e.errors))
        except Invalid as e:
            self.params = {}
            self.fail_json(msg=_describe(e))

        # Sanity check.
        for group in self.mutually_exclusive:
            given = [name for name in group if self.params.get(name) is not None]
            if len(given) > 1:
                self.fail_json(
                    msg="parameters are mutually exclusive: {0}".format("|".join(group))
                )

    def warn(self, msg):
        self.warnings.append(msg)
        logging.getLogger("qbattery").warning("%s", msg)

    def exit_json(self, **kwargs):
        kwargs.setdefault("changed", False)
        if self.warnings:
            kwargs["warnings"] = list(self.warnings)
        print(json.dumps(kwargs, default=_json_default, indent=2))
        sys.exit(0)

    def fail_json(self, msg, **kwargs):
        kwargs["failed"] = True
        kwargs["msg"] = msg
        if self.warnings:
            kwargs["warnings"] = list(self.warnings)
        print(json.dumps(kwargs, default=_json_default, indent=2))
        sys.exit(1)


def _describe(error):
    path = ".".join(str(p) for p in error.path)
    if path:
        return "{0}: {1}".format(path, error.msg)
    return error.msg


def _json_default(obj):
    # numpy scalars and arrays.
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError("{0!r} is not JSON serializable".format(obj))


class SimulationHelper(object):
    def __init__(self, min_numpy_version, min_scipy_version):
        """Holds the merged argument spec and builds simulation inputs from params."""
        # Params for QBatteryModule.
        self.argument_spec = {}
        self.mutually_exclusive = []

        self.min_numpy_version = min_numpy_version
        self.min_scipy_version = min_scipy_version

        self.with_system = False
        self.with_grid = False
        self.with_steady_state = False

    def check_versions(self, module):
        """Fails the module when numpy or scipy is missing or too old."""
        for pkg_name, minimum in (
            ("numpy", self.min_numpy_version),
            ("scipy", self.min_scipy_version),
        ):
            try:
                pkg = importlib.import_module(pkg_name)
            except ImportError:
                err = MissingLibraryError('Missing required library "{0}".'.format(pkg_name))
                module.fail_json(
                    msg=err.detail,
                    code=err.code,
                    pypi="https://pypi.org/project/{0}".format(pkg_name),
                    syspath=sys.path,
                )
                continue
            if minimum is not None and _version_tuple(pkg.__version__) < minimum:
                module.fail_json(
                    msg=_MIN_VERSION_ERROR.format(pkg_name, pkg.__version__, _vstr(minimum))
                )

    def get_system_spec(self, module):
        """Builds the ``SystemSpec`` from module params.

        Invalid physics params are reported through ``module.fail_json()``.
        """
        params = module.params
        try:
            spec = SystemSpec(
                n_b=params["n_b"],
                n_c=params["r"] * params["n_b"],
                omega=params["omega"],
                gamma=params["gamma"],
                temperature=params.get("temperature"),
                nbar=params.get("nbar"),
            )
        except QBatteryError as e:
            module.fail_json(msg=str(e), code=e.code)
            return None

        if spec.n_c < spec.n_b:
            module.warn(
                "n_c ({0}) < n_b ({1}): the charger is smaller than the battery".format(
                    spec.n_c, spec.n_b
                )
            )
        return spec

    def get_point_settings(self, module):
        params = module.params
        return PointSettings(
            omega=params.get("omega", 1.0),
            gamma=params.get("gamma", 1.0),
            t_end=params.get("t_end", DEFAULT_T_END),
            sample_interval=params.get("sample_interval", DEFAULT_SAMPLE_INTERVAL),
            ss_tolerance=params.get("ss_tolerance", DEFAULT_SS_TOLERANCE),
            t_cap=params.get("t_cap", DEFAULT_T_CAP),
            dim_cap=params.get("dim_cap", DEFAULT_DIM_CAP),
            method=params.get("method", "DOP853"),
        )


def get_simulation(
    with_system=False,
    with_grid=False,
    with_steady_state=False,
    argument_spec=None,
    mutually_exclusive=None,
    min_numpy_version=MIN_NUMPY_VERSION,
    min_scipy_version=MIN_SCIPY_VERSION,
    helper_cls=None,
):
    """Returns a helper holding the argument spec for a verb.

    Arguments:
        with_system(bool): Include the physical configuration params
            (n_b, r, omega, gamma, temperature, nbar).
        with_grid(bool): Include the sample grid and integrator params.
        with_steady_state(bool): Include the steady-state search params.
        argument_spec(dict): The verb's own params, merged on top.
        mutually_exclusive(list): List of lists to extend into mutually_exclusive.
        min_numpy_version(tuple): Minimum numpy version allowed.
        min_scipy_version(tuple): Minimum scipy version allowed.
        helper_cls: The helper class to instantiate.

    Returns:
        SimulationHelper
    """
    if helper_cls is None:
        helper_cls = SimulationHelper

    helper = helper_cls(min_numpy_version, min_scipy_version)
    spec = {}
    excl = []

    if with_system:
        helper.with_system = True
        spec.update(
            {
                "n_b": {"type": "int", "required": True, "help": "Battery spins."},
                "r": {
                    "type": "int",
                    "default": 1,
                    "help": "Charger to battery ratio, n_c = r * n_b.",
                },
                "omega": {"type": "float", "default": 1.0, "help": "Transition frequency."},
                "gamma": {"type": "float", "default": 1.0, "help": "Damping rate."},
                "temperature": {"type": "float", "help": "Reservoir temperature."},
                "nbar": {"type": "float", "help": "Reservoir mean occupation."},
            }
        )
        excl.append(["temperature", "nbar"])

    if with_grid:
        helper.with_grid = True
        spec.update(
            {
                "t_end": {"type": "float", "default": DEFAULT_T_END, "help": "Final time."},
                "sample_interval": {
                    "type": "float",
                    "default": DEFAULT_SAMPLE_INTERVAL,
                    "help": "Sample grid spacing.",
                },
                "method": {
                    "default": "DOP853",
                    "choices": sorted(INTEGRATORS),
                    "help": "Runge-Kutta pair.",
                },
            }
        )

    if with_steady_state:
        helper.with_steady_state = True
        spec.update(
            {
                "ss_tolerance": {
                    "type": "float",
                    "default": DEFAULT_SS_TOLERANCE,
                    "help": "Steady-state residual threshold.",
                },
                "t_cap": {
                    "type": "float",
                    "default": DEFAULT_T_CAP,
                    "help": "Maximum steady-state integration time.",
                },
                "dim_cap": {
                    "type": "int",
                    "default": DEFAULT_DIM_CAP,
                    "help": "Largest joint dimension allowed.",
                },
            }
        )

    if argument_spec is not None:
        for k in argument_spec.keys():
            if k in spec:
                raise KeyError("{0}: key used by the simulation helper.".format(k))
            spec[k] = argument_spec[k]

    if mutually_exclusive is not None:
        excl.extend(mutually_exclusive)

    # Done.
    helper.argument_spec = spec
    helper.mutually_exclusive = excl
    return helper


def version_string():
    return "qbattery {0}".format(__version__)
