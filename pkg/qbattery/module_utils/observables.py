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

"""Energy, power, work and entanglement observables of the charger/battery state.

Energy densities are per spin, in units of omega and shifted so that the
ground state is 0 and the fully excited state is 1.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import logging
from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy import linalg

from qbattery.module_utils.dynamics import gibbs_ladder_state
from qbattery.module_utils.errors import DimensionMismatchError, InvalidParameterError

logger = logging.getLogger(__name__)

CHARGER = "charger"
BATTERY = "battery"

# Trace norms this far below 1 are round-off; anything lower is a broken state.
TRACE_NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    e_c: float
    e_b: float
    p_b: float
    s_b: float
    sdot_b: float
    w_closed: float
    w_open: float

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def as_row(self):
        return astuple(self)


def _split(rho, spec):
    rho = np.asarray(rho)
    dc, db = spec.dims
    if rho.shape != (dc * db, dc * db):
        raise DimensionMismatchError(
            "state shape {0} does not match ({1}x{2}) joint space".format(rho.shape, dc, db)
        )
    return rho.reshape(dc, db, dc, db)


def partial_trace_charger(rho, spec):
    """Battery reduced state Tr_C(rho), dimension N_B + 1."""
    return np.einsum("ijik->jk", _split(rho, spec))


def partial_trace_battery(rho, spec):
    """Charger reduced state Tr_B(rho), dimension N_C + 1."""
    return np.einsum("ijkj->ik", _split(rho, spec))


def partial_transpose_battery(rho, spec):
    d = spec.dim
    return _split(rho, spec).transpose(0, 3, 2, 1).reshape(d, d)


def partial_transpose_charger(rho, spec):
    d = spec.dim
    return _split(rho, spec).transpose(2, 1, 0, 3).reshape(d, d)


def _ladder_m(n_spins):
    return n_spins / 2.0 - np.arange(n_spins + 1)


def _density_from_reduced(reduced, n_spins):
    jz = float(np.real(np.dot(_ladder_m(n_spins), np.diagonal(reduced))))
    return jz / n_spins + 0.5


def energy_density(rho, which, spec):
    """<J^z> / N + 1/2 for the charger or the battery."""
    if which == CHARGER:
        return _density_from_reduced(partial_trace_battery(rho, spec), spec.n_c)
    if which == BATTERY:
        return _density_from_reduced(partial_trace_charger(rho, spec), spec.n_b)
    raise InvalidParameterError(
        "which must be '{0}' or '{1}', got {2!r}".format(CHARGER, BATTERY, which)
    )


def total_energy(rho, spec):
    """N_C e_C + N_B e_B, in units of omega."""
    return spec.n_c * energy_density(rho, CHARGER, spec) + spec.n_b * energy_density(
        rho, BATTERY, spec
    )


def capacity(rho_ss, spec):
    return spec.n_b * energy_density(rho_ss, BATTERY, spec)


def power_density(gen, rho, spec=None):
    """Tr(J_B^z apply(rho)) / N_B, in units of omega * gamma."""
    spec = spec or gen.spec
    drho_b = partial_trace_charger(gen.apply(rho), spec)
    return float(np.real(np.dot(_ladder_m(spec.n_b), np.diagonal(drho_b)))) / spec.n_b


def ergotropy_density(rho, spec):
    """Closed-system extractable work per battery spin.

    The passive state pairs the reduced-state eigenvalues, largest first,
    with the battery energy levels, lowest first.
    """
    rho_b = partial_trace_charger(rho, spec)
    populations = np.sort(linalg.eigvalsh(0.5 * (rho_b + rho_b.conj().T)))[::-1]
    levels = np.sort(_ladder_m(spec.n_b) / spec.n_b)
    passive = float(np.dot(populations, levels)) + 0.5
    work = _density_from_reduced(rho_b, spec.n_b) - passive
    # Round-off only; the passive energy never exceeds the state's.
    return max(work, 0.0)


def thermal_energy_density(spec):
    """Battery energy density of the Dicke-ladder Gibbs state at the reservoir temperature."""
    gibbs = gibbs_ladder_state(spec.n_b, spec.boltzmann_ratio)
    return _density_from_reduced(gibbs, spec.n_b)


def work_open(rho, spec):
    """e_B minus the thermal battery energy density."""
    return energy_density(rho, BATTERY, spec) - thermal_energy_density(spec)


def log_negativity(rho, spec, side=BATTERY):
    """log2 of the trace norm of the partial transpose across the charger/battery cut."""
    if side == BATTERY:
        pt = partial_transpose_battery(rho, spec)
    elif side == CHARGER:
        pt = partial_transpose_charger(rho, spec)
    else:
        raise InvalidParameterError(
            "side must be '{0}' or '{1}', got {2!r}".format(CHARGER, BATTERY, side)
        )
    trace_norm = float(np.sum(linalg.svdvals(pt)))
    if trace_norm < 1.0 - TRACE_NORM_TOLERANCE:
        logger.warning(
            "partial transpose trace norm %.12g is below 1; state is not normalised", trace_norm
        )
        return float(np.log2(trace_norm))
    return max(float(np.log2(trace_norm)), 0.0)


def sampled_rate(times, values):
    """Time derivative of a series sampled on a uniform grid.

    Central differences inside, one-sided at both ends.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape:
        raise DimensionMismatchError(
            "times {0} and values {1} differ in shape".format(times.shape, values.shape)
        )
    if len(times) < 3:
        raise InvalidParameterError(
            "rate needs >= 3 samples, got {0}".format(len(times))
        )
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise InvalidParameterError("rate needs a uniform time grid")
    return np.gradient(values, steps[0], edge_order=1)


def entanglement_rate(trajectory, spec):
    """dS_B/dt along a trajectory that kept its states.

    Returns:
        list: (t, sdot_b) pairs, one per sample.
    """
    if trajectory.states is None:
        raise InvalidParameterError("entanglement_rate needs a trajectory with kept states")
    values = [log_negativity(rho, spec) for rho in trajectory.states]
    rates = sampled_rate(trajectory.times, values)
    return [(float(t), float(rate)) for t, rate in zip(trajectory.times, rates)]


class Observer:
    """Per-sample observable evaluation for ``dynamics.evolve``.

    Returns (t, e_c, e_b, p_b, s_b, w_closed, w_open); the entanglement rate
    needs the whole series and is added by ``build_records``.
    """

    def __init__(self, gen):
        self.gen = gen
        self.spec = gen.spec
        self.e_thermal = thermal_energy_density(self.spec)

    def __call__(self, t, rho):
        spec = self.spec
        rho_b = partial_trace_charger(rho, spec)
        e_b = _density_from_reduced(rho_b, spec.n_b)
        return (
            float(t),
            energy_density(rho, CHARGER, spec),
            e_b,
            power_density(self.gen, rho, spec),
            log_negativity(rho, spec),
            ergotropy_density(rho, spec),
            e_b - self.e_thermal,
        )


def build_records(samples):
    """Turns ``Observer`` samples into ``ObservableRecord`` rows."""
    if not samples:
        return []
    data = np.asarray(samples, dtype=float)
    if len(data) >= 3:
        sdot = sampled_rate(data[:, 0], data[:, 4])
    else:
        logger.warning("too few samples (%d) for the entanglement rate", len(data))
        sdot = np.full(len(data), np.nan)
    return [
        ObservableRecord(
            t=row[0],
            e_c=row[1],
            e_b=row[2],
            p_b=row[3],
            s_b=row[4],
            sdot_b=rate,
            w_closed=row[5],
            w_open=row[6],
        )
        for row, rate in zip(data, sdot)
    ]
