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

"""Physical configuration and the collective-decay Lindblad generator.

Units: hbar = k_B = 1, the damping rate gamma fixes the time unit and
energies are reported in units of omega.  The generator is

    d(rho)/dt = -i omega [J^z, rho]
                + (gamma / 2) [(nbar + 1) D(J^-, rho) + nbar D(J^+, rho)]

with J^{z,+,-} the charger plus battery collective operators and
D(O, rho) = 2 O rho O^dag - O^dag O rho - rho O^dag O.  With this
normalisation a single isolated excited spin decays at rate gamma.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

from qbattery.module_utils.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    as_integer,
    as_number,
)
from qbattery.module_utils.spinops import build_collective_ops, embed_joint

logger = logging.getLogger(__name__)

# Largest joint dimension for which the explicit d^2 x d^2 matrix is built.
SUPEROPERATOR_MAX_DIM = 40

# omega / T beyond which the Bose occupation is zero in double precision.
_MAX_EXPONENT = 700.0


def _positive_int(name, value):
    value = as_integer(value, name)
    if value < 1:
        raise InvalidParameterError(
            "{0} must be a positive integer, got {1}".format(name, value)
        )
    return value


def _finite(name, value, minimum=None, strict=False):
    value = as_number(value, name)
    if minimum is not None:
        if strict and value <= minimum:
            raise InvalidParameterError(
                "{0} must be > {1}, got {2}".format(name, minimum, value)
            )
        if not strict and value < minimum:
            raise InvalidParameterError(
                "{0} must be >= {1}, got {2}".format(name, minimum, value)
            )
    return value


def thermal_occupation(omega, temperature):
    """Bose-Einstein occupation 1 / (exp(omega / T) - 1).

    Args:
        omega (float): Transition frequency, > 0.
        temperature (float): k_B T in units of hbar * omega's unit, >= 0.

    Returns:
        float: The mean occupation; exactly 0.0 at T = 0.
    """
    omega = _finite("omega", omega, minimum=0.0, strict=True)
    temperature = _finite("temperature", temperature, minimum=0.0)

    if temperature == 0.0:
        return 0.0

    x = omega / temperature
    if x > _MAX_EXPONENT:
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class SystemSpec:
    """Charger/battery configuration.

    Exactly one of ``temperature`` and ``nbar`` may be given; when neither is,
    the reservoir is at zero temperature.
    """

    n_b: int
    n_c: int
    omega: float = 1.0
    gamma: float = 1.0
    temperature: Optional[float] = None
    nbar: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "n_b", _positive_int("n_b", self.n_b))
        object.__setattr__(self, "n_c", _positive_int("n_c", self.n_c))
        object.__setattr__(
            self, "omega", _finite("omega", self.omega, minimum=0.0, strict=True)
        )
        object.__setattr__(
            self, "gamma", _finite("gamma", self.gamma, minimum=0.0, strict=True)
        )

        if self.temperature is not None and self.nbar is not None:
            raise InvalidParameterError(
                "temperature and nbar are mutually exclusive"
            )
        if self.temperature is not None:
            object.__setattr__(
                self,
                "temperature",
                _finite("temperature", self.temperature, minimum=0.0),
            )
        if self.nbar is not None:
            object.__setattr__(self, "nbar", _finite("nbar", self.nbar, minimum=0.0))

        if self.n_c < self.n_b:
            logger.warning(
                "n_c (%d) < n_b (%d): the charger is smaller than the battery",
                self.n_c,
                self.n_b,
            )

    @property
    def ratio(self):
        return self.n_c / self.n_b

    @property
    def dims(self):
        return (self.n_c + 1, self.n_b + 1)

    @property
    def dim(self):
        return (self.n_c + 1) * (self.n_b + 1)

    @property
    def occupation(self):
        """Mean reservoir occupation nbar at the transition frequency."""
        if self.nbar is not None:
            return self.nbar
        return thermal_occupation(self.omega, self.temperature or 0.0)

    @property
    def effective_temperature(self):
        """k_B T consistent with the occupation."""
        if self.temperature is not None:
            return self.temperature
        if not self.nbar:
            return 0.0
        return self.omega / math.log1p(1.0 / self.nbar)

    @property
    def boltzmann_ratio(self):
        """exp(-omega / T) = nbar / (nbar + 1)."""
        occupation = self.occupation
        return occupation / (occupation + 1.0)


def dissipator(op, rho):
    """D(O, rho) = 2 O rho O^dag - O^dag O rho - rho O^dag O."""
    op = np.asarray(op)
    rho = np.asarray(rho)

    # Sanity check.
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionMismatchError("operator must be square, got {0}".format(op.shape))
    if rho.shape != op.shape:
        raise DimensionMismatchError(
            "operator {0} and state {1} shapes differ".format(op.shape, rho.shape)
        )

    op_dag = op.conj().T
    n = op_dag @ op
    return 2.0 * op @ rho @ op_dag - n @ rho - rho @ n


class Generator:
    """Lindblad generator for one ``SystemSpec``.

    ``apply`` is matrix-free: with K = -iH - sum_k (r_k / 2) L_k^dag L_k the
    action is K rho + rho K^dag + sum_k r_k L_k rho L_k^dag, evaluated with
    sparse L_k and K.
    """

    representation = "matrix-free"

    def __init__(self, spec, joint_ops):
        self.spec = spec
        self.ops = joint_ops
        self.nbar = spec.occupation

        self.hamiltonian = spec.omega * np.asarray(joint_ops.jz_total)
        self.jump_down = np.asarray(joint_ops.jminus_total)
        self.jump_up = np.asarray(joint_ops.jplus_total)
        for matrix in (self.hamiltonian, self.jump_down, self.jump_up):
            matrix.flags.writeable = False

        self.rates = [(self.jump_down, spec.gamma * (self.nbar + 1.0))]
        if self.nbar > 0.0:
            self.rates.append((self.jump_up, spec.gamma * self.nbar))

        k = -1j * sparse.csr_matrix(self.hamiltonian)
        self._jumps = []
        for op, rate in self.rates:
            op_sp = sparse.csr_matrix(op)
            k = k - 0.5 * rate * (op_sp.conj().T @ op_sp)
            self._jumps.append((rate, op_sp))
        self._k = sparse.csr_matrix(k)

    @property
    def dim(self):
        return self.spec.dim

    def _check(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                "state shape {0} does not match generator dimension {1}".format(
                    rho.shape, self.dim
                )
            )
        return rho

    def apply(self, rho):
        """Returns d(rho)/dt in units of gamma."""
        rho = self._check(rho)

        # rho K^dag = (K rho^dag)^dag
        out = self._k @ rho
        out = out + (self._k @ rho.conj().T).conj().T
        for rate, op in self._jumps:
            # L rho L^dag = L (L rho^dag)^dag
            out = out + rate * (op @ (op @ rho.conj().T).conj().T)
        return np.asarray(out)

    def apply_vector(self, t, y):
        """Row-major vectorised ``apply`` for ODE solvers."""
        return self.apply(y.reshape(self.dim, self.dim)).ravel()

    def superoperator(self, max_dim=SUPEROPERATOR_MAX_DIM):
        """Explicit Liouvillian acting on row-major vec(rho).

        Uses vec(A rho B) = (A kron B^T) vec(rho).
        """
        if self.dim > max_dim:
            raise InvalidParameterError(
                "superoperator needs dim <= {0}, got {1}".format(max_dim, self.dim)
            )

        eye = np.eye(self.dim)
        k = self._k.toarray()
        liouvillian = np.kron(k, eye) + np.kron(eye, k.conj())
        for rate, op in self._jumps:
            op = op.toarray()
            liouvillian += rate * np.kron(op, op.conj())
        return liouvillian


def build_generator(spec):
    """Assembles the generator for a ``SystemSpec``.

    Args:
        spec (SystemSpec): Physical configuration.

    Returns:
        Generator
    """
    if not isinstance(spec, SystemSpec):
        raise InvalidParameterError(
            "build_generator() needs a SystemSpec, got {0}".format(type(spec).__name__)
        )

    joint = embed_joint(build_collective_ops(spec.n_c), build_collective_ops(spec.n_b))
    gen = Generator(spec, joint)
    logger.debug(
        "generator: n_c=%d n_b=%d dim=%d nbar=%.6g representation=%s",
        spec.n_c,
        spec.n_b,
        gen.dim,
        gen.nbar,
        gen.representation,
    )
    return gen
