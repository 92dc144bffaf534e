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

"""Collective spin operators on the symmetric (Dicke) ladder.

Each ensemble of N spin-1/2 particles is kept in its maximal-spin sector
j = N/2, dimension N+1.  Basis states are ordered by descending m, so index 0
is the fully excited state |j, +j> and index N is the ground state |j, -j>.
Joint operators act on charger (x) battery with the charger index major.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

from dataclasses import dataclass

import numpy as np

from qbattery.module_utils.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    as_integer,
)


def _frozen(matrix):
    matrix = np.array(matrix, dtype=complex)
    matrix.flags.writeable = False
    return matrix


def matrices_close(a, b, atol):
    """Entrywise comparison with a caller supplied absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.all(np.abs(a - b) <= atol))


def commutator(a, b):
    return a @ b - b @ a


@dataclass(frozen=True)
class CollectiveOps:
    """J^z, J^+ and J^- for one Dicke ladder, hbar = 1."""

    n_spins: int
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray

    @property
    def dim(self):
        return self.n_spins + 1

    @property
    def j(self):
        return self.n_spins / 2.0

    def m_values(self):
        """The m quantum numbers in basis order (descending)."""
        return self.j - np.arange(self.dim)


@dataclass(frozen=True)
class JointOps:
    """Collective operators embedded in the charger (x) battery space."""

    n_c: int
    n_b: int
    jz_c: np.ndarray
    jplus_c: np.ndarray
    jminus_c: np.ndarray
    jz_b: np.ndarray
    jplus_b: np.ndarray
    jminus_b: np.ndarray

    @property
    def dims(self):
        return (self.n_c + 1, self.n_b + 1)

    @property
    def dim(self):
        return (self.n_c + 1) * (self.n_b + 1)

    @property
    def jz_total(self):
        return self.jz_c + self.jz_b

    @property
    def jminus_total(self):
        return self.jminus_c + self.jminus_b

    @property
    def jplus_total(self):
        return self.jplus_c + self.jplus_b


def build_collective_ops(n_spins):
    """Builds the collective operators for ``n_spins`` spin-1/2 particles.

    Args:
        n_spins (int): Number of spins N; the ladder has N+1 states.

    Returns:
        CollectiveOps
    """
    n_spins = as_integer(n_spins, "n_spins")
    if n_spins < 1:
        raise InvalidParameterError(
            "n_spins must be >= 1, got {0}".format(n_spins)
        )

    j = n_spins / 2.0
    m = j - np.arange(n_spins + 1)

    jz = np.diag(m)

    # jplus maps m -> m+1, i.e. basis index k+1 -> k.
    jplus = np.zeros((n_spins + 1, n_spins + 1))
    lower = m[1:]
    jplus[np.arange(n_spins), np.arange(1, n_spins + 1)] = np.sqrt(
        j * (j + 1) - lower * (lower + 1)
    )

    return CollectiveOps(
        n_spins=n_spins,
        jz=_frozen(jz),
        jplus=_frozen(jplus),
        jminus=_frozen(jplus.T),
    )


def embed_joint(ops_c, ops_b):
    """Embeds charger and battery ladders into the joint product space.

    Args:
        ops_c (CollectiveOps): Charger ladder.
        ops_b (CollectiveOps): Battery ladder.

    Returns:
        JointOps: J_C^{z,+,-} (x) 1_B and 1_C (x) J_B^{z,+,-}.
    """
    for ops in (ops_c, ops_b):
        if not isinstance(ops, CollectiveOps):
            raise InvalidParameterError("embed_joint() needs CollectiveOps inputs")
        if ops.jz.shape != (ops.dim, ops.dim):
            raise DimensionMismatchError(
                "ladder for {0} spins has shape {1}".format(ops.n_spins, ops.jz.shape)
            )

    eye_c = np.eye(ops_c.dim)
    eye_b = np.eye(ops_b.dim)

    return JointOps(
        n_c=ops_c.n_spins,
        n_b=ops_b.n_spins,
        jz_c=_frozen(np.kron(ops_c.jz, eye_b)),
        jplus_c=_frozen(np.kron(ops_c.jplus, eye_b)),
        jminus_c=_frozen(np.kron(ops_c.jminus, eye_b)),
        jz_b=_frozen(np.kron(eye_c, ops_b.jz)),
        jplus_b=_frozen(np.kron(eye_c, ops_b.jplus)),
        jminus_b=_frozen(np.kron(eye_c, ops_b.jminus)),
    )


def ladder_state(n_spins, index):
    """Projector onto the ``index``-th ladder state (0 is fully excited)."""
    if not 0 <= index <= n_spins:
        raise InvalidParameterError(
            "ladder index {0} outside 0..{1}".format(index, n_spins)
        )
    rho = np.zeros((n_spins + 1, n_spins + 1), dtype=complex)
    rho[index, index] = 1.0
    return rho
