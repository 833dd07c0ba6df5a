import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from urequiv.entropy import (
    collision_entropy,
    collision_variance_closed_form,
    qubit_entropy_from_variance,
    qubit_variance_from_entropy,
    renyi_entropy,
    renyi_entropy_rows,
    spin1_collision_entropy_from_variances,
    spin32_collision_entropy_from_moments,
    spin32_moments,
)
from urequiv.errors import ArgumentOutOfRange, EntropyOutOfRange, VarianceOutOfRange
from urequiv.observables import born_probabilities, pauli_operator, spin_operator, variance
from urequiv.reconstruction import spin1_moments
from urequiv.states import DensityMatrix, maximally_mixed, pure_state, random_mixed, rng_from_seed

ALPHAS = (0.3, 0.5, 1.0, 2.0, 5.0, 10.0)
LN2 = np.log(2)


@pytest.mark.parametrize("alpha", ALPHAS + (1 + 1e-7,))
def test_renyi_endpoints(alpha):
    assert renyi_entropy([1, 0], alpha) == 0
    assert renyi_entropy([0.5, 0.5], alpha) == pytest.approx(LN2, abs=1e-12)


def test_renyi_collision_example():
    assert collision_entropy([0.75, 0.25]) == pytest.approx(-np.log(5 / 8), abs=1e-15)


def test_renyi_bad_index():
    with pytest.raises(ValueError):
        renyi_entropy([0.5, 0.5], 0.0)


def test_shannon_switch_continuous():
    rng = rng_from_seed(3)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        p = rng.dirichlet(np.ones(n))
        h1 = renyi_entropy(p, 1.0)
        assert abs(renyi_entropy(p, 1 + 1e-4) - h1) < 1e-3
        assert abs(renyi_entropy(p, 1 - 1e-4) - h1) < 1e-3
        assert abs(renyi_entropy(p, 1 + 1.1e-6) - h1) < 1e-6 * np.log(n)
        assert 0 <= h1 <= np.log(n) + 1e-12


def test_rows_match_scalar():
    p = rng_from_seed(4).dirichlet(np.ones(3), size=50)
    for alpha in ALPHAS:
        np.testing.assert_allclose(renyi_entropy_rows(p, alpha), [renyi_entropy(r, alpha) for r in p], atol=1e-14)


def test_vtoh_examples():
    for alpha in ALPHAS:
        assert qubit_entropy_from_variance(0.0, alpha) == 0
        assert qubit_entropy_from_variance(1.0, alpha) == pytest.approx(LN2, abs=1e-15)
    want = -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))
    assert qubit_entropy_from_variance(0.75, 1) == pytest.approx(want, abs=1e-15)
    assert want == pytest.approx(0.5623, abs=1e-4)


def test_vtoh_range():
    with pytest.raises(VarianceOutOfRange):
        qubit_entropy_from_variance(1.1, 2)
    with pytest.raises(VarianceOutOfRange):
        qubit_entropy_from_variance(-0.1, 2)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_vtoh_strictly_increasing(alpha):
    v = np.linspace(0, 1, 1000)
    assert np.all(np.diff(qubit_entropy_from_variance(v, alpha)) > 0)


def test_htov_examples():
    assert qubit_variance_from_entropy(0.0, 1) == 0
    assert qubit_variance_from_entropy(LN2, 1) == 1
    assert qubit_variance_from_entropy(np.log(8 / 5), 2) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(EntropyOutOfRange):
        qubit_variance_from_entropy(0.8, 1)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_round_trips(alpha):
    h = np.linspace(0, LN2, 1000)
    assert np.max(np.abs(qubit_entropy_from_variance(qubit_variance_from_entropy(h, alpha), alpha) - h)) < 1e-9
    v = np.linspace(0, 1, 1000)
    assert np.max(np.abs(qubit_variance_from_entropy(qubit_entropy_from_variance(v, alpha), alpha) - v)) < 1e-9


def test_collision_closed_form():
    h = np.linspace(0, LN2, 1000)
    assert np.max(np.abs(qubit_variance_from_entropy(h, 2) - collision_variance_closed_form(h))) < 1e-10


@given(st.floats(0, LN2), st.floats(0.1, 20))
def test_scalar_inverse(h, alpha):
    v = qubit_variance_from_entropy(h, alpha)
    assert 0 <= v <= 1
    assert abs(qubit_entropy_from_variance(v, alpha) - h) < 1e-9


def test_cross_module_consistency():
    rng = rng_from_seed(12)
    for s in range(200):
        n = rng.standard_normal(3)
        a = pauli_operator(n / np.linalg.norm(n))
        rho = random_mixed(2, s)
        for alpha in ALPHAS:
            direct = renyi_entropy(born_probabilities(rho, a), alpha)
            assert abs(qubit_entropy_from_variance(variance(rho, a), alpha) - direct) < 1e-9


def test_spin1_collision_examples():
    assert spin1_collision_entropy_from_variances(0, 0) == 0
    assert spin1_collision_entropy_from_variances(1, 0) == pytest.approx(LN2)
    assert spin1_collision_entropy_from_variances(2 / 3, 2 / 9) == pytest.approx(np.log(3))
    jz = spin_operator(2, [0, 0, 1])
    s = 1 / np.sqrt(2)
    m = spin1_moments(pure_state([s, 0, s]), jz)
    assert (m["vJ"], m["vJ2"]) == pytest.approx((1, 0))
    with pytest.raises(ArgumentOutOfRange):
        spin1_collision_entropy_from_variances(2, 1)


def _rand_state(rng, s, dim):
    if s % 2:
        return random_mixed(dim, s)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return pure_state(v / np.linalg.norm(v))


def _rand_axis(rng):
    n = rng.standard_normal(3)
    return n / np.linalg.norm(n)


def test_spin1_collision_random():
    rng = rng_from_seed(31)
    worst = 0.0
    for s in range(1000):
        a = spin_operator(2, _rand_axis(rng))
        rho = _rand_state(rng, s, 3)
        m = spin1_moments(rho, a)
        got = spin1_collision_entropy_from_variances(m["vJ"], m["vJ2"])
        worst = max(worst, abs(got - collision_entropy(born_probabilities(rho, a))))
    assert worst < 1e-10


def test_spin32_examples():
    jz = spin_operator(3, [0, 0, 1])
    m = spin32_moments(pure_state([1, 0, 0, 0]), jz)
    assert m["J4"] == pytest.approx(m["J"] * m["J3"])
    assert spin32_collision_entropy_from_moments(m) == pytest.approx(0, abs=1e-12)
    m = spin32_moments(maximally_mixed(4), jz)
    assert m["J4"] == pytest.approx(41 / 16)
    assert spin32_collision_entropy_from_moments(m) == pytest.approx(np.log(4), abs=1e-12)


def test_spin32_random():
    rng = rng_from_seed(32)
    worst = 0.0
    for s in range(1000):
        a = spin_operator(3, _rand_axis(rng))
        rho = _rand_state(rng, s, 4)
        got = spin32_collision_entropy_from_moments(spin32_moments(rho, a))
        worst = max(worst, abs(got - collision_entropy(born_probabilities(rho, a))))
    assert worst < 1e-9


def test_spin32_bad_argument():
    with pytest.raises(ArgumentOutOfRange):
        spin32_collision_entropy_from_moments({"vJ3": 0, "vJ2": 0, "vJ": 1, "J4": 0, "J": 0, "J3": 0})
