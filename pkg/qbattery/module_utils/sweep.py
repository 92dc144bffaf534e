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

"""Parameter sweeps over battery size, charger ratio and temperature.

A sweep point integrates one configuration, records the observable series on
the sample grid, then continues from the last sample to the steady state.
Summary rows, trajectory files and the derived fits are written as CSV.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import csv
import logging
import math
import os
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import List

import numpy as np
from scipy import stats
from voluptuous import (
    All,
    In,
    Invalid,
    Length,
    MultipleInvalid,
    Optional as Opt,
    PREVENT_EXTRA,
    Range,
    Required,
    Schema,
)

from qbattery.module_utils import observables
from qbattery.module_utils.dynamics import (
    DEFAULT_SS_TOLERANCE,
    DEFAULT_T_CAP,
    INTEGRATORS,
    evolve,
    initial_state,
    steady_state,
)
from qbattery.module_utils.errors import (
    ConfigError,
    InvalidParameterError,
    QBatteryError,
    SweepPointError,
    as_integer,
    as_number,
)
from qbattery.module_utils.lindblad import SystemSpec, build_generator

logger = logging.getLogger(__name__)

DEFAULT_T_END = 50.0
DEFAULT_SAMPLE_INTERVAL = 0.01
DEFAULT_DIM_CAP = 200

SUMMARY_FILE = "summary.csv"
SLOPE_FILE = "temperature_slope.csv"
FIT_FILE = "scaling_fit.csv"

FLOAT_FORMAT = "%.15g"

LIST_KEYS = ("n_b_list", "r_list", "temperature_list")


def _invalid_on_error(coerce, value):
    try:
        return coerce(value)
    except InvalidParameterError as e:
        raise Invalid(e.detail)


def number(value):
    """Voluptuous validator for a finite float."""
    return _invalid_on_error(as_number, value)


def integer(value):
    """Voluptuous validator for an integer that refuses to round."""
    return _invalid_on_error(as_integer, value)


def _positive():
    return All(number, Range(min=0, min_included=False))


CONFIG_SCHEMA = Schema(
    {
        Required("n_b_list"): All([All(integer, Range(min=1))], Length(min=1)),
        Required("r_list"): All([All(integer, Range(min=1))], Length(min=1)),
        Required("temperature_list"): All([All(number, Range(min=0))], Length(min=1)),
        Required("omega"): _positive(),
        Required("gamma"): _positive(),
        Required("t_end"): _positive(),
        Required("sample_interval"): _positive(),
        Required("ss_tolerance"): _positive(),
        Required("out_dir"): All(str, Length(min=1)),
        Opt("t_cap", default=DEFAULT_T_CAP): _positive(),
        Opt("dim_cap", default=DEFAULT_DIM_CAP): All(integer, Range(min=4)),
        Opt("workers", default=1): All(integer, Range(min=1)),
        Opt("method", default="DOP853"): In(sorted(INTEGRATORS)),
    },
    extra=PREVENT_EXTRA,
)


@dataclass(frozen=True)
class PointSettings:
    """Time grid and solver controls shared by every point of a sweep."""

    omega: float = 1.0
    gamma: float = 1.0
    t_end: float = DEFAULT_T_END
    sample_interval: float = DEFAULT_SAMPLE_INTERVAL
    ss_tolerance: float = DEFAULT_SS_TOLERANCE
    t_cap: float = DEFAULT_T_CAP
    dim_cap: int = DEFAULT_DIM_CAP
    method: str = "DOP853"
    diagnostic_stride: int = 1


@dataclass(frozen=True)
class SweepConfig:
    n_b_list: List[int]
    r_list: List[int]
    temperature_list: List[float]
    omega: float
    gamma: float
    t_end: float
    sample_interval: float
    ss_tolerance: float
    out_dir: str
    t_cap: float = DEFAULT_T_CAP
    dim_cap: int = DEFAULT_DIM_CAP
    workers: int = 1
    method: str = "DOP853"

    @classmethod
    def from_dict(cls, values):
        """Validates ``values`` against ``CONFIG_SCHEMA``."""
        try:
            clean = CONFIG_SCHEMA(dict(values))
        except MultipleInvalid as e:
            raise ConfigError("; ".join(_describe(err) for err in e.errors))
        except Invalid as e:
            raise ConfigError(_describe(e))

        config = cls(**clean)
        for n_b in config.n_b_list:
            for r in config.r_list:
                dim = (r * n_b + 1) * (n_b + 1)
                if dim > config.dim_cap:
                    raise ConfigError(
                        "n_b={0}, r={1} gives dimension {2} > dim_cap {3}".format(
                            n_b, r, dim, config.dim_cap
                        )
                    )
        return config

    @property
    def settings(self):
        return PointSettings(
            omega=self.omega,
            gamma=self.gamma,
            t_end=self.t_end,
            sample_interval=self.sample_interval,
            ss_tolerance=self.ss_tolerance,
            t_cap=self.t_cap,
            dim_cap=self.dim_cap,
            method=self.method,
        )

    def points(self):
        """(n_b, r, temperature) in config order: n_b, then r, then T."""
        return [
            (n_b, r, t)
            for n_b in self.n_b_list
            for r in self.r_list
            for t in self.temperature_list
        ]


def _describe(error):
    path = ".".join(str(p) for p in error.path)
    if path:
        return "{0}: {1}".format(path, error.msg)
    return error.msg


@dataclass
class SweepRow:
    n_b: int
    n_c: int
    r: int
    temperature: float
    nbar: float
    e_ss: float
    capacity: float
    p_max: float
    t_p_max: float
    s_ss: float
    sdot_max: float
    t_sdot_max: float
    lag: float
    w_closed_ss: float
    w_open_ss: float
    converged: bool
    # Diagnostics, not written to the summary file.
    residual: float = float("nan")
    elapsed_time: float = float("nan")
    max_trace_error: float = float("nan")
    min_eigenvalue: float = float("nan")
    peak_flags: List[str] = field(default_factory=list)
    message: str = ""

    @classmethod
    def columns(cls):
        names = [f.name for f in fields(cls)]
        return names[: names.index("converged") + 1]

    def as_row(self):
        return [getattr(self, name) for name in self.columns()]

    def as_dict(self):
        return OrderedDict((f.name, getattr(self, f.name)) for f in fields(self))


@dataclass(frozen=True)
class Peak:
    t: float
    value: float
    flagged: bool


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class TemperatureSlope:
    n_b: int
    r: int
    temperature: float
    de_dt: float


@dataclass
class SweepResult:
    rows: List[SweepRow]
    files: List[str]
    fits: List[OrderedDict] = field(default_factory=list)
    slopes: List[TemperatureSlope] = field(default_factory=list)

    @property
    def failed(self):
        return [row for row in self.rows if not row.converged]


def locate_peak(times, values):
    """Largest local maximum of a sampled series.

    A local maximum is an interior sample strictly above its left neighbour
    and not below its right one.  Ties go to the earliest time.  A series
    with no local maximum returns its largest boundary sample, flagged.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or len(values) < 3:
        raise InvalidParameterError("locate_peak needs >= 3 matching samples")

    inner = values[1:-1]
    mask = (inner > values[:-2]) & (inner >= values[2:])
    candidates = np.flatnonzero(mask) + 1
    if candidates.size:
        # argmax returns the first occurrence.
        best = candidates[int(np.argmax(values[candidates]))]
        return Peak(t=float(times[best]), value=float(values[best]), flagged=False)

    best = 0 if values[0] >= values[-1] else len(values) - 1
    return Peak(t=float(times[best]), value=float(values[best]), flagged=True)


def scaling_fit(xs, ys):
    """Ordinary least squares y = slope * x + intercept."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or len(xs) < 3:
        raise InvalidParameterError("scaling_fit needs >= 3 matching points")
    if np.unique(xs).size < 2:
        raise InvalidParameterError("scaling_fit needs distinct x values")
    result = stats.linregress(xs, ys)
    return FitResult(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
    )


def temperature_slope(rows):
    """dE_ss/dT per (n_b, r) group, by finite differences over the swept temperatures."""
    groups = OrderedDict()
    for row in rows:
        if row.converged and math.isfinite(row.e_ss):
            groups.setdefault((row.n_b, row.r), []).append(row)

    slopes = []
    for (n_b, r), group in groups.items():
        group = sorted(group, key=lambda row: row.temperature)
        temps = np.array([row.temperature for row in group])
        if len(temps) < 2 or np.unique(temps).size != len(temps):
            continue
        energies = np.array([row.e_ss for row in group])
        for t, slope in zip(temps, np.gradient(energies, temps)):
            slopes.append(TemperatureSlope(n_b=n_b, r=r, temperature=float(t), de_dt=float(slope)))
    return slopes


def scaling_fits(rows, quantities=("p_max", "sdot_max")):
    """Fits of each quantity against n_b for every (r, T) with >= 3 distinct n_b."""
    groups = OrderedDict()
    for row in rows:
        if row.converged:
            groups.setdefault((row.r, row.temperature), []).append(row)

    fits = []
    for (r, temperature), group in groups.items():
        if len({row.n_b for row in group}) < 3:
            continue
        xs = [row.n_b for row in group]
        for quantity in quantities:
            fit = scaling_fit(xs, [getattr(row, quantity) for row in group])
            fits.append(
                OrderedDict(
                    [
                        ("r", r),
                        ("temperature", temperature),
                        ("quantity", quantity),
                        ("slope", fit.slope),
                        ("intercept", fit.intercept),
                        ("r_squared", fit.r_squared),
                    ]
                )
            )
    return fits


def run_point(n_b, r, temperature=None, settings=None, nbar=None):
    """Runs one configuration.

    Args:
        n_b (int): Battery spins.
        r (int): Charger-to-battery ratio, n_c = r * n_b.
        temperature (float): Reservoir temperature; exclusive with ``nbar``.
        settings (PointSettings): Grid and solver controls.
        nbar (float): Reservoir occupation given directly.

    Returns:
        tuple: (list of ObservableRecord, SweepRow)
    """
    settings = settings or PointSettings()
    r = as_integer(r, "r")
    if temperature is None and nbar is None:
        temperature = 0.0

    spec = SystemSpec(
        n_b=n_b,
        n_c=r * n_b,
        omega=settings.omega,
        gamma=settings.gamma,
        temperature=temperature,
        nbar=nbar,
    )
    if spec.dim > settings.dim_cap:
        raise InvalidParameterError(
            "dimension {0} exceeds dim_cap {1}".format(spec.dim, settings.dim_cap)
        )

    logger.info(
        "point n_b=%d r=%d T=%.6g nbar=%.6g dim=%d",
        spec.n_b,
        r,
        spec.effective_temperature,
        spec.occupation,
        spec.dim,
    )

    gen = build_generator(spec)
    trajectory = evolve(
        gen,
        initial_state(spec),
        settings.t_end,
        settings.sample_interval,
        method=settings.method,
        keep_states=False,
        observer=observables.Observer(gen),
        diagnostic_stride=settings.diagnostic_stride,
    )
    records = observables.build_records(trajectory.observations)

    result = steady_state(
        gen,
        trajectory.final_state,
        tolerance=settings.ss_tolerance,
        t_cap=settings.t_cap,
        method=settings.method,
        t_start=float(trajectory.times[-1]),
    )
    rho_ss = result.rho_ss

    times = [rec.t for rec in records]
    flags = []
    if len(records) >= 3:
        p_peak = locate_peak(times, [rec.p_b for rec in records])
        s_peak = locate_peak(times, [rec.sdot_b for rec in records])
    else:
        p_peak = s_peak = Peak(t=float("nan"), value=float("nan"), flagged=True)
    if p_peak.flagged:
        flags.append("p_max")
    if s_peak.flagged:
        flags.append("sdot_max")

    messages = [m for m in (trajectory.message, result.message) if m]
    row = SweepRow(
        n_b=spec.n_b,
        n_c=spec.n_c,
        r=r,
        temperature=spec.effective_temperature,
        nbar=spec.occupation,
        e_ss=observables.energy_density(rho_ss, observables.BATTERY, spec),
        capacity=observables.capacity(rho_ss, spec),
        p_max=p_peak.value,
        t_p_max=p_peak.t,
        s_ss=observables.log_negativity(rho_ss, spec),
        sdot_max=s_peak.value,
        t_sdot_max=s_peak.t,
        lag=s_peak.t - p_peak.t,
        w_closed_ss=observables.ergotropy_density(rho_ss, spec),
        w_open_ss=observables.work_open(rho_ss, spec),
        converged=bool(result.converged and not trajectory.truncated),
        residual=result.residual,
        elapsed_time=result.elapsed_time,
        max_trace_error=float(np.max(trajectory.trace_errors)),
        min_eigenvalue=float(np.nanmin(trajectory.min_eigenvalues)),
        peak_flags=flags,
        message="; ".join(messages),
    )
    logger.info(
        "point n_b=%d r=%d done: e_ss=%.6g p_max=%.6g converged=%s",
        row.n_b,
        row.r,
        row.e_ss,
        row.p_max,
        row.converged,
    )
    return records, row


def _failed_row(n_b, r, temperature, message):
    nan = float("nan")
    return SweepRow(
        n_b=n_b,
        n_c=r * n_b,
        r=r,
        temperature=temperature,
        nbar=nan,
        e_ss=nan,
        capacity=nan,
        p_max=nan,
        t_p_max=nan,
        s_ss=nan,
        sdot_max=nan,
        t_sdot_max=nan,
        lag=nan,
        w_closed_ss=nan,
        w_open_ss=nan,
        converged=False,
        message=message,
    )


def _point_task(args):
    n_b, r, temperature, settings = args
    try:
        return run_point(n_b, r, temperature, settings)
    except QBatteryError as e:
        err = SweepPointError(
            "n_b={0} r={1} T={2:g}: {3}".format(n_b, r, temperature, e)
        )
        logger.error("%s", err)
        return None, _failed_row(n_b, r, temperature, str(err))


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(v) for v in row])
    logger.info("wrote %s", path)
    return path


def write_trajectory(path, records):
    return write_csv(
        path, observables.ObservableRecord.columns(), (rec.as_row() for rec in records)
    )


def trajectory_filename(n_b, r, temperature):
    return "trajectory_nb{0}_r{1}_T{2}.csv".format(n_b, r, "%g" % temperature)


def load_config(path):
    """Reads a flat ``key = value`` sweep config file.

    ``#`` starts a comment; list keys take comma separated values.
    """
    values = OrderedDict()
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except (IOError, OSError) as e:
        raise ConfigError("cannot read {0}: {1}".format(path, e))

    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("{0}:{1}: expected key = value".format(path, lineno))
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError("{0}:{1}: duplicate key {2}".format(path, lineno, key))
        if key in LIST_KEYS:
            value = [item.strip() for item in value.split(",") if item.strip()]
        values[key] = value

    return SweepConfig.from_dict(values)


def run_sweep(config):
    """Runs every point of ``config`` and writes the CSV outputs.

    Points may run in worker processes; all files are written here, in
    config order.

    Returns:
        SweepResult
    """
    os.makedirs(config.out_dir, exist_ok=True)
    settings = config.settings
    tasks = [(n_b, r, t, settings) for n_b, r, t in config.points()]
    logger.info("sweep: %d points, %d workers", len(tasks), config.workers)

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            outcomes = list(executor.map(_point_task, tasks))
    else:
        outcomes = [_point_task(task) for task in tasks]

    rows = []
    files = []
    for (n_b, r, t, _), (records, row) in zip(tasks, outcomes):
        rows.append(row)
        if records is not None:
            path = os.path.join(config.out_dir, trajectory_filename(n_b, r, t))
            files.append(write_trajectory(path, records))

    files.append(
        write_csv(
            os.path.join(config.out_dir, SUMMARY_FILE),
            SweepRow.columns(),
            (row.as_row() for row in rows),
        )
    )

    slopes = []
    if len(config.temperature_list) >= 2:
        slopes = temperature_slope(rows)
        files.append(
            write_csv(
                os.path.join(config.out_dir, SLOPE_FILE),
                ["n_b", "r", "temperature", "de_dt"],
                ((s.n_b, s.r, s.temperature, s.de_dt) for s in slopes),
            )
        )

    fits = scaling_fits(rows)
    if fits:
        files.append(
            write_csv(
                os.path.join(config.out_dir, FIT_FILE),
                list(fits[0].keys()),
                (list(fit.values()) for fit in fits),
            )
        )

    failed = [row for row in rows if not row.converged]
    if failed:
        logger.warning("sweep: %d of %d points not converged", len(failed), len(rows))
    return SweepResult(rows=rows, files=files, fits=fits, slopes=slopes)
