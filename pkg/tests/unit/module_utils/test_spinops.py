# Copyright 2024 qbattery developers
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR
# ANY SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF
# OR IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.


from __future__ import absolute_import, division, print_function

__metaclass__ = type

import numpy as np
import pytest

from qbattery.module_utils.errors import InvalidParameterError
from qbattery.module_utils.spinops import (
    CollectiveOps,
    build_collective_ops,
    commutator,
    embed_joint,
    ladder_state,
    matrices_close,
)


def test_single_spin_ladder():
    ops = build_collective_ops(1)

    assert ops.dim == 2
    assert matrices_close(ops.jz, np.diag([0.5, -0.5]), 1e-15)
    assert matrices_close(ops.jplus, np.array([[0, 1], [0, 0]]), 1e-15)
    assert matrices_close(ops.jminus, np.array([[0, 0], [1, 0]]), 1e-15)


def test_spin_one_ladder():
    ops = build_collective_ops(2)

    assert ops.jplus[0, 1] == pytest.approx(np.sqrt(2))
    assert ops.jplus[1, 2] == pytest.approx(np.sqrt(2))
    assert np.count_nonzero(ops.jplus) == 2


@pytest.mark.parametrize("n", range(1, 11))
def test_su2_algebra(n):
    ops = build_collective_ops(n)

    assert matrices_close(commutator(ops.jz, ops.jplus), ops.jplus, 1e-12)
    assert matrices_close(commutator(ops.jplus, ops.jminus), 2 * ops.jz, 1e-12)
    assert matrices_close(ops.jminus, ops.jplus.conj().T, 0.0)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_jz_spectrum_descending(n):
    ops = build_collective_ops(n)

    expected = n / 2.0 - np.arange(n + 1)
    assert np.allclose(np.diag(ops.jz).real, expected, atol=0)
    assert np.allclose(ops.m_values(), expected, atol=0)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_ladder_ends(n):
    ops = build_collective_ops(n)
    top = np.zeros(n + 1)
    top[0] = 1.0
    bottom = np.zeros(n + 1)
    bottom[-1] = 1.0

    assert np.allclose(ops.jplus @ top, 0.0)
    assert np.allclose(ops.jminus @ bottom, 0.0)


@pytest.mark.parametrize("n", [0, -1, 1.5, True, "two"])
def test_build_collective_ops_rejects(n):
    with pytest.raises(InvalidParameterError):
        build_collective_ops(n)


def test_collective_ops_are_read_only():
    ops = build_collective_ops(2)

    with pytest.raises(ValueError):
        ops.jz[0, 0] = 7.0


def test_embed_two_spins():
    joint = embed_joint(build_collective_ops(1), build_collective_ops(1))

    assert joint.dim == 4
    assert joint.dims == (2, 2)
    assert np.allclose(np.diag(joint.jz_total).real, [1.0, 0.0, 0.0, -1.0])


def test_embed_dimension():
    joint = embed_joint(build_collective_ops(2), build_collective_ops(1))

    assert joint.dim == 6
    assert joint.jz_c.shape == (6, 6)
    assert joint.jminus_b.shape == (6, 6)


def test_embed_factors_commute():
    joint = embed_joint(build_collective_ops(3), build_collective_ops(2))

    for a in (joint.jz_c, joint.jplus_c, joint.jminus_c):
        for b in (joint.jz_b, joint.jplus_b, joint.jminus_b):
            assert matrices_close(commutator(a, b), np.zeros_like(a), 1e-12)


def test_embed_hermiticity():
    joint = embed_joint(build_collective_ops(2), build_collective_ops(2))

    assert matrices_close(joint.jz_c, joint.jz_c.conj().T, 0.0)
    assert matrices_close(joint.jplus_b.conj().T, joint.jminus_b, 0.0)
    assert matrices_close(joint.jplus_total.conj().T, joint.jminus_total, 0.0)


def test_embed_rejects_other_types():
    with pytest.raises(InvalidParameterError):
        embed_joint(np.eye(2), build_collective_ops(1))


def test_matrices_close_shape_mismatch():
    assert not matrices_close(np.eye(2), np.eye(3), 1.0)


def test_ladder_state():
    rho = ladder_state(2, 1)

    assert rho[1, 1] == 1.0
    assert np.trace(rho) == 1.0
    with pytest.raises(InvalidParameterError):
        ladder_state(2, 3)


def test_collective_ops_dataclass():
    ops = build_collective_ops(4)

    assert isinstance(ops, CollectiveOps)
    assert ops.j == 2.0
    assert ops.dim == 5
