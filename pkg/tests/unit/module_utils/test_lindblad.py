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

import logging
import math

import numpy as np
import pytest

from qbattery.module_utils import oracle
from qbattery.module_utils.errors import DimensionMismatchError, InvalidParameterError
from qbattery.module_utils.lindblad import (
    SystemSpec,
    build_generator,
    dissipator,
    thermal_occupation,
)
from qbattery.module_utils.spinops import build_collective_ops, embed_joint


def random_state(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


# thermal_occupation()


def test_thermal_occupation_zero_temperature():
    assert thermal_occupation(1.0, 0.0) == 0.0


def test_thermal_occupation_unit():
    assert thermal_occupation(1.0, 1.0) == pytest.approx(1.0 / (math.e - 1.0), rel=1e-12)
    assert thermal_occupation(1.0, 1.0) == pytest.approx(0.581977, abs=1e-6)


def test_thermal_occupation_high_temperature():
    assert thermal_occupation(1.0, 100.0) == pytest.approx(99.5, rel=0.01)


def test_thermal_occupation_tiny_temperature():
    assert thermal_occupation(1.0, 1e-6) == 0.0


@pytest.mark.parametrize("omega,temperature", [(1.0, -0.1), (0.0, 1.0), (-1.0, 1.0)])
def test_thermal_occupation_rejects(omega, temperature):
    with pytest.raises(InvalidParameterError):
        thermal_occupation(omega, temperature)


# SystemSpec


def test_spec_defaults_to_zero_temperature():
    spec = SystemSpec(n_b=1, n_c=2)

    assert spec.occupation == 0.0
    assert spec.effective_temperature == 0.0
    assert spec.boltzmann_ratio == 0.0
    assert spec.ratio == 2.0
    assert spec.dims == (3, 2)
    assert spec.dim == 6


def test_spec_temperature_and_nbar_agree():
    by_t = SystemSpec(n_b=1, n_c=1, temperature=1.0)
    by_n = SystemSpec(n_b=1, n_c=1, nbar=by_t.occupation)

    assert by_n.effective_temperature == pytest.approx(1.0, rel=1e-12)
    assert by_n.boltzmann_ratio == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert by_t.boltzmann_ratio == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_spec_mutually_exclusive():
    with pytest.raises(InvalidParameterError):
        SystemSpec(n_b=1, n_c=1, temperature=1.0, nbar=1.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_b=0, n_c=1),
        dict(n_b=1, n_c=0),
        dict(n_b=1, n_c=1, omega=0.0),
        dict(n_b=1, n_c=1, gamma=-1.0),
        dict(n_b=1, n_c=1, temperature=-1.0),
        dict(n_b=1, n_c=1, nbar=-0.5),
        dict(n_b=1, n_c=1, nbar=float("inf")),
        dict(n_b=1.5, n_c=2),
        dict(n_b="two", n_c=2),
        dict(n_b=True, n_c=2),
        dict(n_b=1, n_c=1, omega="fast"),
    ],
)
def test_spec_rejects(kwargs):
    with pytest.raises(InvalidParameterError):
        SystemSpec(**kwargs)


def test_spec_small_charger_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="qbattery"):
        SystemSpec(n_b=3, n_c=1)

    assert "charger is smaller" in caplog.text


# dissipator()


def test_dissipator_ground_state():
    ops = build_collective_ops(1)
    ground = np.diag([0.0, 1.0]).astype(complex)

    assert np.allclose(dissipator(ops.jminus, ground), 0.0, atol=1e-15)


def test_dissipator_excited_state():
    ops = build_collective_ops(1)
    excited = np.diag([1.0, 0.0]).astype(complex)

    assert np.allclose(dissipator(ops.jminus, excited), np.diag([-2.0, 2.0]), atol=1e-15)


def test_dissipator_dark_state():
    joint = embed_joint(build_collective_ops(1), build_collective_ops(1))
    dark = oracle.two_spin_projector("minus")

    assert np.allclose(dissipator(joint.jminus_total, dark), 0.0, atol=1e-15)


def test_dissipator_hermitian_traceless():
    joint = embed_joint(build_collective_ops(2), build_collective_ops(1))
    rho = random_state(joint.dim, 3)
    out = dissipator(joint.jminus_total, rho)

    assert abs(np.trace(out)) < 1e-12
    assert np.allclose(out, out.conj().T, atol=1e-12)


def test_dissipator_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        dissipator(np.eye(2), np.eye(3))
    with pytest.raises(DimensionMismatchError):
        dissipator(np.ones((2, 3)), np.eye(2))


# build_generator() and Generator.apply()


def test_dark_state_is_stationary():
    gen = build_generator(SystemSpec(n_b=1, n_c=1))

    assert np.linalg.norm(gen.apply(oracle.two_spin_projector("minus"))) < 1e-12


@pytest.mark.parametrize("n_b,n_c,nbar", [(1, 1, 0.0), (2, 4, 0.3), (3, 3, 2.0)])
def test_maximally_mixed_traceless(n_b, n_c, nbar):
    gen = build_generator(SystemSpec(n_b=n_b, n_c=n_c, nbar=nbar))
    rho = np.eye(gen.dim, dtype=complex) / gen.dim

    assert abs(np.trace(gen.apply(rho))) < 1e-12


@pytest.mark.parametrize("n_b,n_c", [(1, 1), (2, 3), (3, 6)])
def test_ground_state_stationary_at_zero_temperature(n_b, n_c):
    gen = build_generator(SystemSpec(n_b=n_b, n_c=n_c, omega=2.0))
    ground = np.zeros((gen.dim, gen.dim), dtype=complex)
    ground[-1, -1] = 1.0

    assert np.linalg.norm(gen.apply(ground)) < 1e-12


def test_random_state_traceless_hermitian():
    gen = build_generator(SystemSpec(n_b=2, n_c=4, nbar=0.7, omega=1.7))
    out = gen.apply(random_state(gen.dim, 11))

    assert abs(np.trace(out)) < 1e-12
    assert np.max(np.abs(out - out.conj().T)) < 1e-12


def test_apply_linear():
    gen = build_generator(SystemSpec(n_b=2, n_c=2, nbar=0.5))
    a = random_hermitian(gen.dim, 1)
    b = random_hermitian(gen.dim, 2)

    combined = gen.apply(0.3 * a - 1.7 * b)
    separate = 0.3 * gen.apply(a) - 1.7 * gen.apply(b)
    assert np.max(np.abs(combined - separate)) < 1e-12


def test_apply_matches_dissipator_form():
    spec = SystemSpec(n_b=1, n_c=2, nbar=0.4, omega=1.3, gamma=0.8)
    gen = build_generator(spec)
    rho = random_state(gen.dim, 5)

    expected = -1j * (gen.hamiltonian @ rho - rho @ gen.hamiltonian) + 0.5 * spec.gamma * (
        (spec.nbar + 1.0) * dissipator(gen.jump_down, rho)
        + spec.nbar * dissipator(gen.jump_up, rho)
    )
    assert np.max(np.abs(gen.apply(rho) - expected)) < 1e-12


def test_apply_dimension_mismatch():
    gen = build_generator(SystemSpec(n_b=1, n_c=1))

    with pytest.raises(DimensionMismatchError):
        gen.apply(np.eye(3))


def test_build_generator_requires_spec():
    with pytest.raises(InvalidParameterError):
        build_generator({"n_b": 1, "n_c": 1})


def test_thermal_and_dark_mixture_both_stationary():
    nbar = 1.0
    gen = build_generator(SystemSpec(n_b=1, n_c=1, nbar=nbar))
    x = nbar / (nbar + 1.0)
    single = np.diag([x, 1.0]) / (1.0 + x)
    thermal_product = np.kron(single, single).astype(complex)
    mixed = oracle.from_two_spin_basis(oracle.two_spin_steady_state(nbar, 0.5))

    assert np.linalg.norm(gen.apply(mixed)) < 1e-12
    assert np.linalg.norm(gen.apply(thermal_product)) < 1e-12
    # Two different stationary states: the kernel is degenerate.
    assert np.linalg.norm(mixed - thermal_product) > 0.1


# Generator.superoperator()


def test_superoperator_matches_apply():
    gen = build_generator(SystemSpec(n_b=2, n_c=2, nbar=0.6, omega=0.9))
    rho = random_state(gen.dim, 8)

    vec = gen.superoperator() @ rho.ravel()
    assert np.max(np.abs(vec.reshape(gen.dim, gen.dim) - gen.apply(rho))) < 1e-12


def test_superoperator_dimension_limit():
    gen = build_generator(SystemSpec(n_b=5, n_c=10))

    with pytest.raises(InvalidParameterError):
        gen.superoperator()


@pytest.mark.parametrize("nbar", [0.0, 0.1, 1.0, 10.0])
@pytest.mark.parametrize("omega", [0.5, 1.3])
def test_two_spin_generator_matches_rate_equations(nbar, omega):
    gen = build_generator(SystemSpec(n_b=1, n_c=1, nbar=nbar, omega=omega))

    numeric = oracle.superoperator_to_two_spin_basis(gen.superoperator())
    exact = oracle.two_spin_superoperator(nbar, gamma=1.0, omega=omega)
    assert np.max(np.abs(numeric - exact)) < 1e-12


def test_two_spin_population_rates_zero_temperature():
    gen = build_generator(SystemSpec(n_b=1, n_c=1))
    sup = oracle.superoperator_to_two_spin_basis(gen.superoperator())

    # Row-major: rho_ii sits at 5 * i.
    assert sup[0, 0] == pytest.approx(-2.0, abs=1e-12)
    assert sup[5, 0] == pytest.approx(2.0, abs=1e-12)
    assert sup[5, 5] == pytest.approx(-2.0, abs=1e-12)
    assert np.allclose(sup[10, :], 0.0, atol=1e-12)
    assert sup[15, 5] == pytest.approx(2.0, abs=1e-12)
