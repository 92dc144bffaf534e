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

"""Time evolution under a ``Generator`` and steady-state search.

Trajectories are integrated with an explicit adaptive Runge-Kutta pair from
``scipy.integrate`` and sampled on a uniform grid through the solver's dense
output.  Positivity and trace are monitored per sample and never repaired.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import logging
import math
from dataclasses import dataclass, field
from typing import Any, List, Optional

import numpy as np
from scipy import linalg
from scipy.integrate import DOP853, RK45

from qbattery.module_utils.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    NotConvergedError,
    StepSizeUnderflowError,
)
from qbattery.module_utils.spinops import ladder_state

logger = logging.getLogger(__name__)

INTEGRATORS = {
    "DOP853": DOP853,
    "RK45": RK45,
}

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
DEFAULT_SS_TOLERANCE = 1e-10
DEFAULT_T_CAP = 200.0

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8

# Emit an INFO progress line every this many solver steps.
_PROGRESS_EVERY = 5000


@dataclass(frozen=True)
class DensityDiagnostics:
    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float

    @property
    def valid(self):
        return (
            self.trace_error < TRACE_TOL
            and self.hermiticity_error < HERMITICITY_TOL
            and self.min_eigenvalue > -POSITIVITY_TOL
        )


@dataclass
class Trajectory:
    """Samples of one integration on a uniform grid.

    ``states`` is None when the caller asked not to keep them; the last
    sampled state is always available as ``final_state``.
    """

    times: np.ndarray
    states: Optional[List[np.ndarray]]
    trace_errors: np.ndarray
    min_eigenvalues: np.ndarray
    final_state: np.ndarray
    observations: List[Any] = field(default_factory=list)
    truncated: bool = False
    message: str = ""
    steps: int = 0

    def __len__(self):
        return len(self.times)

    def raise_for_status(self):
        if self.truncated:
            raise StepSizeUnderflowError(
                "trajectory truncated at t={0:.6g}: {1}".format(
                    self.times[-1], self.message
                )
            )


@dataclass
class SteadyStateResult:
    rho_ss: np.ndarray
    residual: float
    elapsed_time: float
    converged: bool
    message: str = ""

    def raise_for_status(self):
        if not self.converged:
            raise NotConvergedError(
                "steady state residual {0:.3g} at t={1:.6g}: {2}".format(
                    self.residual, self.elapsed_time, self.message
                )
            )


def validate_density_matrix(rho, log=True):
    """Measures how far ``rho`` is from a valid density matrix.

    Args:
        rho (ndarray): Square complex matrix.
        log (bool): Log a warning when a tolerance is exceeded.

    Returns:
        DensityDiagnostics
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError("density matrix must be square, got {0}".format(rho.shape))

    herm = float(np.max(np.abs(rho - rho.conj().T)))
    diag = DensityDiagnostics(
        trace_error=float(abs(np.trace(rho) - 1.0)),
        hermiticity_error=herm,
        min_eigenvalue=float(linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]),
    )
    if log and not diag.valid:
        logger.warning(
            "density matrix out of tolerance: trace error %.3g, hermiticity %.3g, "
            "min eigenvalue %.3g",
            diag.trace_error,
            diag.hermiticity_error,
            diag.min_eigenvalue,
        )
    return diag


def gibbs_ladder_state(n_spins, boltzmann_ratio):
    """Gibbs state exp(-omega J^z / T) / Z on one Dicke ladder.

    Args:
        n_spins (int): Ladder size N.
        boltzmann_ratio (float): exp(-omega / T) in [0, 1]; 0 is the ground state.
    """
    if not 0.0 <= boltzmann_ratio <= 1.0:
        raise InvalidParameterError(
            "Boltzmann ratio must lie in [0, 1], got {0}".format(boltzmann_ratio)
        )
    # Index k holds N - k excitations.
    excitations = n_spins - np.arange(n_spins + 1)
    weights = np.power(float(boltzmann_ratio), excitations)
    return np.diag(weights / weights.sum()).astype(complex)


def initial_state(spec):
    """Fully excited charger times the battery Gibbs state."""
    rho_c = ladder_state(spec.n_c, 0)
    rho_b = gibbs_ladder_state(spec.n_b, spec.boltzmann_ratio)
    return np.kron(rho_c, rho_b)


def _check_inputs(gen, rho0, method):
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (gen.dim, gen.dim):
        raise DimensionMismatchError(
            "initial state shape {0} does not match generator dimension {1}".format(
                rho0.shape, gen.dim
            )
        )
    if method not in INTEGRATORS:
        raise InvalidParameterError(
            "method must be one of {0}, got {1!r}".format(sorted(INTEGRATORS), method)
        )
    return rho0


def sample_grid(t_end, sample_interval, t_start=0.0):
    """Uniform grid t_start + k * sample_interval up to t_start + t_end."""
    if not t_end > 0:
        raise InvalidParameterError("t_end must be > 0, got {0}".format(t_end))
    if not sample_interval > 0:
        raise InvalidParameterError(
            "sample_interval must be > 0, got {0}".format(sample_interval)
        )
    count = int(math.floor(t_end / sample_interval + 1e-9))
    if count < 1:
        raise InvalidParameterError(
            "sample_interval {0} exceeds t_end {1}".format(sample_interval, t_end)
        )
    return t_start + sample_interval * np.arange(count + 1)


def evolve(
    gen,
    rho0,
    t_end,
    sample_interval,
    method="DOP853",
    rtol=DEFAULT_RTOL,
    atol=DEFAULT_ATOL,
    keep_states=True,
    observer=None,
    diagnostic_stride=1,
):
    """Integrates the master equation and samples it on a uniform grid.

    Args:
        gen (Generator): The generator.
        rho0 (ndarray): Initial density matrix.
        t_end (float): Final time in units of 1/gamma.
        sample_interval (float): Grid spacing.
        method (str): ``DOP853`` or ``RK45``.
        keep_states (bool): Keep every sampled state in memory.
        observer (callable): Called as ``observer(t, rho)`` for every sample;
            return values are collected in ``Trajectory.observations``.
        diagnostic_stride (int): Compute positivity every this many samples.

    Returns:
        Trajectory
    """
    rho0 = _check_inputs(gen, rho0, method)
    times = sample_grid(t_end, sample_interval)
    dim = gen.dim
    stride = max(1, int(diagnostic_stride))

    states = [] if keep_states else None
    observations = []
    trace_errors = []
    min_eigs = []
    warned = [False]

    def emit(index, y):
        rho = y.reshape(dim, dim)
        if keep_states:
            states.append(rho.copy())
        trace_errors.append(float(abs(np.trace(rho) - 1.0)))
        if index % stride == 0 or index == len(times) - 1:
            diag = validate_density_matrix(rho, log=not warned[0])
            min_eigs.append(diag.min_eigenvalue)
            if not diag.valid:
                warned[0] = True
        else:
            min_eigs.append(np.nan)
        if observer is not None:
            observations.append(observer(times[index], rho))
        return rho

    last = emit(0, rho0.ravel())

    solver = INTEGRATORS[method](
        gen.apply_vector, times[0], rho0.ravel(), times[-1], rtol=rtol, atol=atol
    )

    index = 1
    steps = 0
    truncated = False
    message = ""
    while index < len(times):
        message = solver.step()
        steps += 1
        if solver.status == "failed":
            truncated = True
            logger.warning(
                "integrator failed at t=%.6g after %d steps: %s", solver.t, steps, message
            )
            break

        dense = solver.dense_output()
        while index < len(times) and times[index] <= solver.t:
            last = emit(index, dense(times[index]))
            index += 1

        if steps % _PROGRESS_EVERY == 0:
            logger.info("integrator at t=%.6g, %d steps", solver.t, steps)

        if solver.status == "finished":
            break

    count = index
    logger.debug(
        "evolve: dim=%d samples=%d steps=%d truncated=%s", dim, count, steps, truncated
    )

    return Trajectory(
        times=times[:count],
        states=states,
        trace_errors=np.asarray(trace_errors),
        min_eigenvalues=np.asarray(min_eigs),
        final_state=np.array(last),
        observations=observations,
        truncated=truncated,
        message=(message or "") if truncated else "",
        steps=steps,
    )


def residual_norm(gen, rho):
    """Frobenius norm of apply(rho)."""
    return float(np.linalg.norm(gen.apply(rho)))


def steady_state(
    gen,
    rho0,
    tolerance=DEFAULT_SS_TOLERANCE,
    t_cap=DEFAULT_T_CAP,
    method="DOP853",
    rtol=DEFAULT_RTOL,
    atol=DEFAULT_ATOL,
    t_start=0.0,
):
    """Integrates from ``rho0`` until the generator residual drops below ``tolerance``.

    The kernel of the generator is degenerate, so the answer depends on the
    dark-state content of ``rho0``; this is why no kernel solve is used here.

    Args:
        gen (Generator): The generator.
        rho0 (ndarray): Starting state, e.g. the last sample of a trajectory.
        tolerance (float): Residual threshold, Frobenius norm.
        t_cap (float): Maximum integration time.
        t_start (float): Time already elapsed at ``rho0``.

    Returns:
        SteadyStateResult: ``converged`` is False when ``t_cap`` was reached;
        ``rho_ss`` is then the iterate with the smallest residual.
    """
    if not tolerance > 0:
        raise InvalidParameterError("tolerance must be > 0, got {0}".format(tolerance))
    if not t_cap > 0:
        raise InvalidParameterError("t_cap must be > 0, got {0}".format(t_cap))
    rho0 = _check_inputs(gen, rho0, method)
    dim = gen.dim

    residual = residual_norm(gen, rho0)
    if residual < tolerance:
        logger.debug("steady_state: input already stationary, residual %.3g", residual)
        return SteadyStateResult(
            rho_ss=rho0.copy(), residual=residual, elapsed_time=t_start, converged=True
        )

    best = (residual, t_start, rho0.ravel().copy())
    solver = INTEGRATORS[method](
        gen.apply_vector, t_start, rho0.ravel(), t_start + t_cap, rtol=rtol, atol=atol
    )

    message = ""
    steps = 0
    while solver.status == "running":
        message = solver.step() or ""
        steps += 1
        if solver.status == "failed":
            logger.warning("steady_state: integrator failed at t=%.6g: %s", solver.t, message)
            break

        residual = residual_norm(gen, solver.y.reshape(dim, dim))
        if residual < best[0]:
            best = (residual, solver.t, solver.y.copy())
        if residual < tolerance:
            logger.info(
                "steady state reached at t=%.6g (residual %.3g, %d steps)",
                solver.t,
                residual,
                steps,
            )
            return SteadyStateResult(
                rho_ss=solver.y.reshape(dim, dim).copy(),
                residual=residual,
                elapsed_time=float(solver.t),
                converged=True,
            )

    if not message:
        message = "residual {0:.3g} above tolerance {1:.3g} at t_cap".format(
            best[0], tolerance
        )
    logger.warning("steady_state not converged: %s", message)
    return SteadyStateResult(
        rho_ss=best[2].reshape(dim, dim),
        residual=best[0],
        elapsed_time=float(best[1]),
        converged=False,
        message=message,
    )


def kernel_basis(gen, tol=1e-10):
    """Orthonormal basis of the generator's null space, as d x d matrices.

    Cross-check utility; needs the explicit superoperator.
    """
    liouvillian = gen.superoperator()
    vectors = linalg.null_space(liouvillian, rcond=tol)
    dim = gen.dim
    return [vectors[:, k].reshape(dim, dim) for k in range(vectors.shape[1])]


def kernel_residual(gen, rho, basis=None):
    """Distance (Frobenius) from ``rho`` to the span of the kernel basis."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (gen.dim, gen.dim):
        raise DimensionMismatchError(
            "state shape {0} does not match generator dimension {1}".format(
                rho.shape, gen.dim
            )
        )
    if basis is None:
        basis = kernel_basis(gen)
    vec = rho.ravel()
    if not basis:
        return float(np.linalg.norm(vec))
    b = np.stack([m.ravel() for m in basis], axis=1)
    projected = b @ (b.conj().T @ vec)
    return float(np.linalg.norm(vec - projected))
