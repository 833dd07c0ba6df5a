import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from urequiv.entropy import renyi_entropy
from urequiv.errors import DomainError, NotQubit, NotSpinOne, UnknownRelation
from urequiv.explorer import minimize_over_pure
from urequiv.observables import Observable, axis_in_xz, born_probabilities, pauli_operator, spin_operator
from urequiv.relations import (
    RELATIONS,
    RelationContext,
    evaluate,
    full_qubit_bound,
    full_qubit_terms,
    get_relation,
    htov_simple_slack,
    maassen_uffink,
    majorization_variance,
    mu_variance_form,
    normalized_variance,
    pauli_collision_equality,
    pauli_triple_equality,
    puchala_constant,
    qubit_simple_bound,
    robertson,
    spin1_collision_bound,
    spin1_variance_bound,
)
from urequiv.states import maximally_mixed, pure_state, random_mixed, random_pure, rng_from_seed

SX, SY, SZ = (pauli_operator(e) for e in np.eye(3))
ZERO = pure_state([1, 0])
JX, JZ = spin_operator(2, [1, 0, 0]), spin_operator(2, [0, 0, 1])


def _unit(rng):
    n = rng.standard_normal(3)
    return n / np.linalg.norm(n)


def _qubit_states(n, seed):
    rng = rng_from_seed(seed)
    for s in range(n):
        rho = random_mixed(2, s) if s % 2 else pure_state(random_pure(2, s).amplitudes)
        yield rng, rho


def test_registry_ids():
    assert list(RELATIONS) == [
        "robertson", "maassen_uffink", "mu_variance", "majorization_variance", "full_qubit",
        "qubit_simple", "pauli_triple", "pauli_collision", "spin1_collision", "spin1_variance",
    ]
    with pytest.raises(UnknownRelation):
        get_relation("heisenberg")
    with pytest.raises(KeyError):
        get_relation("heisenberg")


def test_context_scalars_recomputed():
    ctx = RelationContext(random_mixed(2, 1), (SZ, pauli_operator(axis_in_xz(60))))
    assert ctx.a2 == pytest.approx(1) and ctx.b2 == pytest.approx(1)
    assert ctx.kappa == pytest.approx(0.5)
    assert ctx.theta_ab == pytest.approx(60)
    assert ctx.p2 == pytest.approx(2 * ctx.rho.purity - 1)


def test_robertson_examples():
    r = robertson(RelationContext(ZERO, (SX, SY)))
    assert r.lhs == pytest.approx(1) and r.rhs == pytest.approx(1)
    assert r.satisfied and abs(r.slack) < 1e-12
    r = robertson(RelationContext(maximally_mixed(2), (SX, SY)))
    assert (r.lhs, r.rhs) == pytest.approx((0, 1))


def test_maassen_uffink_examples():
    r = maassen_uffink(RelationContext(ZERO, (SZ, SX)))
    assert r.lhs == pytest.approx(np.log(2)) and r.rhs == pytest.approx(np.log(2))
    assert r.satisfied
    r = maassen_uffink(RelationContext(random_mixed(2, 3), (SX, SX)))
    assert r.lhs == pytest.approx(0, abs=1e-15)


def test_maassen_uffink_spin1_zx():
    for s in range(500):
        rho = random_mixed(3, s) if s % 2 else pure_state(random_pure(3, s).amplitudes)
        assert maassen_uffink(RelationContext(rho, (JZ, JX))).satisfied


def test_mu_variance_examples():
    r = mu_variance_form(RelationContext(maximally_mixed(2), (SZ, SX)))
    assert r.lhs == pytest.approx(0.25) and r.rhs == pytest.approx(0.5) and r.satisfied
    r = mu_variance_form(RelationContext(ZERO, (SZ, SX)))
    assert r.lhs == pytest.approx(0.5) and r.rhs == pytest.approx(0.5) and r.satisfied


def test_mu_variance_agrees_with_shannon_form():
    for rng, rho in _qubit_states(1000, 6):
        ctx = RelationContext(rho, (pauli_operator(_unit(rng)), pauli_operator(_unit(rng))))
        mu, vf = maassen_uffink(ctx), mu_variance_form(ctx)
        assert mu.satisfied == vf.satisfied
        h = sum(renyi_entropy(born_probabilities(rho, o).probs, 1) for o in ctx.obs)
        assert abs(np.log(vf.lhs) + h) < 1e-9


def test_majorization_examples():
    r = majorization_variance(RelationContext(ZERO, (SZ, SX)))
    assert r.lhs == pytest.approx(2) and r.rhs == pytest.approx((1 + 1 / np.sqrt(2)) ** 2)
    r = majorization_variance(RelationContext(maximally_mixed(2), (SZ, SX)))
    assert r.lhs == pytest.approx(1)


def test_qubit_relations_reject_spin1():
    ctx = RelationContext(maximally_mixed(3), (JZ, JX))
    for f in (mu_variance_form, majorization_variance, full_qubit_bound, pauli_triple_equality):
        with pytest.raises(NotQubit):
            f(ctx)
    with pytest.raises(NotSpinOne):
        spin1_variance_bound(RelationContext(ZERO, (SZ, SX)))


def test_full_qubit_reduces_to_simple_form():
    for rng, _ in _qubit_states(300, 7):
        psi = pure_state(random_pure(2, int(rng.integers(2**32))).amplitudes)
        ctx = RelationContext(psi, (pauli_operator(_unit(rng)), pauli_operator(_unit(rng))))
        ga, gb = normalized_variance(psi, ctx.obs[0]), normalized_variance(psi, ctx.obs[1])
        lhs, rhs = full_qubit_terms(1.0, 1.0, ctx.cos_theta, 1.0, ga, gb)
        assert abs((lhs - rhs) - htov_simple_slack(ga, gb, ctx.cos_theta)) < 1e-10


def test_full_qubit_domain_error():
    with pytest.raises(DomainError):
        full_qubit_terms(1.0, 1.0, 0.0, 1.0, 1.5, 0.2)


def test_full_qubit_random_mixed():
    for i, (rng, rho) in enumerate(_qubit_states(2000, 8)):
        alphas = (rng.choice([0.5, 1, 2]), rng.choice([0.5, 1, 2]))
        # scaled, shifted observables exercise the a^2, b^2, kappa bookkeeping
        a = Observable.from_matrix(2.5 * pauli_operator(_unit(rng)).matrix + 0.3 * np.eye(2))
        b = Observable.from_matrix(0.7 * pauli_operator(_unit(rng)).matrix)
        ctx = RelationContext(rho, (a, b), alphas)
        assert full_qubit_bound(ctx).satisfied
        assert full_qubit_bound(ctx, variance_first=True).satisfied


def test_orthogonal_pure_boundary_is_sum_one():
    # at theta = 90 deg the pure-state relation is g(A) + g(B) >= 1
    def obj(psi):
        rho = pure_state(psi.amplitudes)
        return normalized_variance(rho, SZ) + normalized_variance(rho, SX)

    res = minimize_over_pure(obj, 2, restarts=8, seed=1)
    assert res.best_value == pytest.approx(1, abs=1e-8)
    g = np.linspace(0, 1, 101)
    s = htov_simple_slack(g, 1 - g, 0.0)
    np.testing.assert_allclose(s, 0, atol=1e-14)


def test_parallel_axes_force_equal_g():
    g = np.linspace(0, 1, 51)
    np.testing.assert_allclose(htov_simple_slack(g, g, 1.0), 0, atol=1e-14)
    assert np.all(htov_simple_slack(g[:-1], g[:-1] + 0.01, 1.0) < 0)


def test_simple_bound_sign_of_axis_irrelevant():
    psi = pure_state(random_pure(2, 9).amplitudes)
    a, b = SZ, pauli_operator(axis_in_xz(150))
    bneg = pauli_operator(-axis_in_xz(150))
    r1 = qubit_simple_bound(RelationContext(psi, (a, b)))
    r2 = qubit_simple_bound(RelationContext(psi, (a, bneg)))
    assert r1.slack == pytest.approx(r2.slack, abs=1e-12)


@pytest.mark.parametrize(
    "rho,want", [(ZERO, 2.0), (maximally_mixed(2), 3.0)]
)
def test_pauli_triple_examples(rho, want):
    r = pauli_triple_equality(RelationContext(rho, ()))
    assert r.lhs == pytest.approx(want, abs=1e-12) and r.is_equality and r.satisfied


def test_pauli_collision_example():
    r = pauli_collision_equality(RelationContext(ZERO, ()))
    assert r.lhs == pytest.approx(2, abs=1e-14) and r.rhs == pytest.approx(2)


def test_pauli_triple_rotated_frame():
    rng = rng_from_seed(10)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    obs = tuple(pauli_operator(q[:, k]) for k in range(3))
    for s in range(200):
        ctx = RelationContext(random_mixed(2, s), obs, tuple(rng.choice([0.5, 1, 2, 3], 3)))
        r = pauli_triple_equality(ctx)
        assert abs(r.residual) < 1e-9 and abs(r.extra["collision_residual"]) < 1e-10


def test_pauli_triple_needs_orthogonal_axes():
    with pytest.raises(DomainError):
        pauli_triple_equality(RelationContext(ZERO, (SX, SX, SZ)))


def test_puchala_constant_example():
    assert 4 * np.exp(-puchala_constant(1 / np.sqrt(2))) == pytest.approx(25 / 8 - 1 / np.sqrt(2), abs=1e-12)
    assert puchala_constant(1.0) == pytest.approx(0, abs=1e-15)


def test_spin1_examples():
    r = spin1_variance_bound(RelationContext(random_mixed(3, 1), (JX, JZ)))
    assert r.rhs == pytest.approx(25 / 8 - 1 / np.sqrt(2), abs=1e-12)
    r = spin1_variance_bound(RelationContext(random_mixed(3, 1), (JZ, JZ)))
    assert r.rhs == pytest.approx(4)
    r = spin1_collision_bound(RelationContext(random_mixed(3, 1), (JZ, JZ)))
    assert r.rhs == pytest.approx(0, abs=1e-15) and r.satisfied


def test_spin1_variance_term_is_collision_probability():
    rng = rng_from_seed(11)
    for s in range(300):
        rho = random_mixed(3, s)
        a = spin_operator(2, _unit(rng))
        p = np.asarray(born_probabilities(rho, a))
        r = spin1_variance_bound(RelationContext(rho, (a, a)))
        assert r.lhs == pytest.approx(4 * np.sum(p**2) ** 2, abs=1e-10)


def test_spin1_xz_sampling():
    rng = rng_from_seed(12)
    for s in range(3000):
        rho = random_mixed(3, s) if s % 2 else pure_state(random_pure(3, s).amplitudes)
        ctx = RelationContext(rho, (JX, JZ))
        r = spin1_collision_bound(ctx)
        assert r.satisfied, r
        assert r.extra["entropic_slack"] >= -1e-9 and r.extra["variance_slack"] >= -1e-9


@given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(RELATIONS)))
def test_every_relation_holds(seed, rid):
    from urequiv.explorer import sample_context

    rng = rng_from_seed(seed)
    ctx = sample_context(RELATIONS[rid], rng, seed % 4)
    rep = evaluate(rid, ctx)
    assert rep.relation_id == rid
    assert rep.satisfied, rep
    assert rep.satisfied == (rep.slack >= -1e-9)
