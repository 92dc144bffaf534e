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

"""Exact results for one charger spin and one battery spin.

Everything here is written out by hand from the rate equations of the
two-spin problem, in the basis

    |1> = up up,  |2> = (up down + down up)/sqrt2,
    |3> = (up down - down up)/sqrt2,  |4> = down down,

and never uses the numeric generator.  Indices in the coefficient table are
1-based to match those labels; arrays are 0-based.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from qbattery.module_utils.errors import DimensionMismatchError, InvalidParameterError

SQRT_HALF = np.sqrt(0.5)

# Total J^z of each basis state.
_M = (1, 0, 0, -1)

LABELS = ("up", "plus", "minus", "down")


@dataclass(frozen=True)
class TwoSpinBasis:
    labels: Tuple[str, ...]
    unitary: np.ndarray


def two_spin_basis():
    """Columns are |1>..|4> in the charger-major product basis (up = index 0)."""
    u = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, SQRT_HALF, SQRT_HALF, 0.0],
            [0.0, SQRT_HALF, -SQRT_HALF, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        dtype=complex,
    )
    u.flags.writeable = False
    return TwoSpinBasis(labels=LABELS, unitary=u)


def _check4(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatchError("two-spin state must be 4x4, got {0}".format(rho.shape))
    return rho


def to_two_spin_basis(rho):
    u = two_spin_basis().unitary
    return u.conj().T @ _check4(rho) @ u


def from_two_spin_basis(rho):
    u = two_spin_basis().unitary
    return u @ _check4(rho) @ u.conj().T


def superoperator_to_two_spin_basis(liouvillian):
    """Re-expresses a row-major 16x16 Liouvillian in the |1>..|4> basis."""
    liouvillian = np.asarray(liouvillian)
    if liouvillian.shape != (16, 16):
        raise DimensionMismatchError(
            "two-spin superoperator must be 16x16, got {0}".format(liouvillian.shape)
        )
    u = two_spin_basis().unitary
    # vec(A rho B) = (A kron B^T) vec(rho), row-major.
    forward = np.kron(u, u.conj())
    return forward.conj().T @ liouvillian @ forward


def two_spin_projector(label):
    """|label><label| in the product basis."""
    if label not in LABELS:
        raise InvalidParameterError(
            "label must be one of {0}, got {1!r}".format(LABELS, label)
        )
    vec = two_spin_basis().unitary[:, LABELS.index(label)]
    return np.outer(vec, vec.conj())


def _check_nbar(nbar):
    if not nbar >= 0 or not np.isfinite(nbar):
        raise InvalidParameterError("nbar must be finite and >= 0, got {0}".format(nbar))


def two_spin_rate_matrix(nbar, gamma=1.0, omega=1.0):
    """Coefficient table of the two-spin equations of motion.

    Returns:
        dict: ``{(i, j): {(k, l): c}}`` for the ten elements with i <= j,
        meaning d(rho_ij)/dt = sum c * rho_kl.  The remaining elements follow
        from rho_ji = conj(rho_ij).
    """
    _check_nbar(nbar)
    g = float(gamma)
    n = float(nbar)
    w = float(omega)

    def phase(i, j):
        return -1j * w * (_M[i - 1] - _M[j - 1])

    return {
        (1, 1): {(1, 1): -2 * g * (n + 1), (2, 2): 2 * g * n},
        (2, 2): {
            (1, 1): 2 * g * (n + 1),
            (2, 2): -2 * g * (2 * n + 1),
            (4, 4): 2 * g * n,
        },
        (3, 3): {},
        (4, 4): {(2, 2): 2 * g * (n + 1), (4, 4): -2 * g * n},
        (1, 2): {(1, 2): -g * (3 * n + 2) + phase(1, 2), (2, 4): 2 * g * n},
        (1, 3): {(1, 3): -g * (n + 1) + phase(1, 3)},
        (1, 4): {(1, 4): -g * (2 * n + 1) + phase(1, 4)},
        (2, 3): {(2, 3): -g * (2 * n + 1) + phase(2, 3)},
        (2, 4): {(2, 4): -g * (3 * n + 1) + phase(2, 4), (1, 2): 2 * g * (n + 1)},
        (3, 4): {(3, 4): -g * n + phase(3, 4)},
    }


def _vec_index(i, j):
    return 4 * (i - 1) + (j - 1)


def two_spin_superoperator(nbar, gamma=1.0, omega=1.0):
    """16x16 row-major Liouvillian in the |1>..|4> basis, built from the table."""
    table = two_spin_rate_matrix(nbar, gamma, omega)
    sup = np.zeros((16, 16), dtype=complex)
    for (i, j), terms in table.items():
        for (k, l), coeff in terms.items():
            sup[_vec_index(i, j), _vec_index(k, l)] = coeff
            if i != j:
                sup[_vec_index(j, i), _vec_index(l, k)] = np.conj(coeff)
    return sup


def two_spin_evolution(nbar, gamma, omega, rho0, times):
    """Exact rho(t) (|1>..|4> basis) by exponentiating the coefficient table."""
    rho0 = _check4(rho0)
    sup = two_spin_superoperator(nbar, gamma, omega)
    vec = rho0.ravel()
    return np.array([(linalg.expm(sup * t) @ vec).reshape(4, 4) for t in times])


def two_spin_populations_zero_temperature(t, gamma=1.0):
    """rho_22, rho_44 and rho_23 at T = 0 starting from charger up, battery down."""
    t = np.asarray(t, dtype=float)
    fast = np.exp(-2.0 * gamma * t)
    return 0.5 * fast, 0.5 * (1.0 - fast), 0.5 * np.exp(-gamma * t)


def two_spin_steady_state(nbar, rho33_initial):
    """Diagonal steady state in the |1>..|4> basis.

    The dark component rho_33 is conserved; the rest relaxes to a thermal
    distribution over the triplet.
    """
    _check_nbar(nbar)
    if not 0.0 <= rho33_initial <= 1.0:
        raise InvalidParameterError(
            "rho33_initial must lie in [0, 1], got {0}".format(rho33_initial)
        )
    n = float(nbar)
    bright = (1.0 - rho33_initial) / (1.0 + 3.0 * n * (n + 1.0))
    return np.diag(
        [n * n * bright, n * (n + 1.0) * bright, rho33_initial, (n + 1.0) ** 2 * bright]
    ).astype(complex)


def two_spin_jz_expectation(nbar):
    """<J_C^z> = <J_B^z> in the steady state reached from charger up, battery down."""
    _check_nbar(nbar)
    n = float(nbar)
    return -(2.0 * n + 1.0) / (12.0 * n * (n + 1.0) + 4.0)


def two_spin_initial_state():
    """Charger up, battery down, in the product basis."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 1.0
    return rho
