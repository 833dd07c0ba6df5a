"""Uncertainty relations as evaluable reports.

Each relation takes a :class:`RelationContext` and returns a
:class:`RelationReport`.  ``slack >= 0`` always means "satisfied", whichever
way the inequality is written; equalities report their residual instead.

Qubit relations work with normalised variances v = Var(A)/lambda^2 where
+-lambda are the eigenvalues of the traceless part of A, so any
nondegenerate qubit observable is accepted.  Entropic inputs are measured
first (Born rule, Renyi entropy) and mapped to variances with g_alpha.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .entropy import (
    qubit_probabilities,
    qubit_variance_from_entropy,
    renyi_entropy,
)
from .errors import DimensionMismatch, DomainError, NotQubit, NotSpinOne, UnknownRelation
from .linalg import commutator_half_i, expectation
from .observables import Observable, born_probabilities, overlap_bound, pauli_operator, variance
from .states import DensityMatrix

SLACK_ATOL = 1e-9
EQUALITY_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class RelationContext:
    """A state, the observables under test and their Renyi indices.

    Derived scalars are recomputed on every access.  ``a2``, ``b2`` and
    ``kappa`` use the traceless parts of the first two observables.
    """

    rho: DensityMatrix
    obs: tuple
    alphas: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "obs", tuple(self.obs))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        for o in self.obs:
            if o.dim != self.rho.dim:
                raise DimensionMismatch("observable and state dimensions differ")

    def _traceless(self, i):
        m = self.obs[i].matrix
        return m - np.trace(m).real / m.shape[0] * np.eye(m.shape[0])

    @property
    def a2(self) -> float:
        m = self._traceless(0)
        return float(np.trace(m @ m).real / 2)

    @property
    def b2(self) -> float:
        m = self._traceless(1)
        return float(np.trace(m @ m).real / 2)

    @property
    def kappa(self) -> float:
        return float(np.trace(self._traceless(0) @ self._traceless(1)).real / 2)

    @property
    def p2(self) -> float:
        return 2.0 * self.rho.purity - 1.0

    @property
    def cos_theta(self) -> float:
        return float(np.clip(self.kappa / np.sqrt(self.a2 * self.b2), -1.0, 1.0))

    @property
    def theta_ab(self) -> float:
        """Angle between the Bloch axes of the first two qubit observables, degrees."""
        return float(np.degrees(np.arccos(self.cos_theta)))

    @property
    def c_ab(self) -> float:
        return overlap_bound(self.obs[0], self.obs[1])

    def alpha(self, i: int) -> float:
        return self.alphas[i] if i < len(self.alphas) else 1.0


@dataclass(frozen=True)
class RelationReport:
    relation_id: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    is_equality: bool = False
    residual: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)


def _inequality(rid, lhs, rhs, slack, **extra):
    return RelationReport(rid, float(lhs), float(rhs), float(slack), bool(slack >= -SLACK_ATOL), extra=extra)


def _equality(rid, lhs, rhs, tol=EQUALITY_ATOL, **extra):
    res = float(lhs - rhs)
    return RelationReport(rid, float(lhs), float(rhs), -abs(res), abs(res) <= tol, True, res, extra=extra)


def _need(ctx, k):
    if len(ctx.obs) < k:
        raise ValueError(f"relation needs {k} observables, context has {len(ctx.obs)}")


def _need_qubit(ctx, k=2):
    _need(ctx, k)
    if ctx.rho.dim != 2:
        raise NotQubit("relation is defined for qubits")


def qubit_half_gap(a: Observable) -> float:
    """lambda for a qubit observable with eigenvalues mu +- lambda."""
    lam = a.eigenvalues
    return float(lam[0] - lam[-1]) / 2.0


def normalized_variance(rho: DensityMatrix, a: Observable) -> float:
    """Var(A)/lambda^2 in [0, 1] for a nondegenerate qubit observable."""
    lam = qubit_half_gap(a)
    if lam <= 0:
        raise DomainError("qubit observable has a degenerate spectrum")
    return min(variance(rho, a) / (lam * lam), 1.0)


def entropic_variance(rho: DensityMatrix, a: Observable, alpha: float) -> float:
    """g_alpha(H_alpha(A)): the normalised variance recovered from the entropy."""
    return float(qubit_variance_from_entropy(renyi_entropy(born_probabilities(rho, a).probs, alpha), alpha))


def puchala_constant(c_ab: float) -> float:
    """c = -ln[((1+c_ab)/2)^4 + (1 - ((1+c_ab)/2)^2)^2], collision-entropy sum bound."""
    w = ((1.0 + c_ab) / 2.0) ** 2
    return float(-np.log(w * w + (1.0 - w) ** 2))


def htov_simple_slack(gA, gB, cos_theta):
    """g_A g_B - (sqrt(1-g_A) sqrt(1-g_B) - |cos theta|)^2 for pure qubit states.

    Entropies are blind to the sign of an observable, so |cos theta| is the
    orientation that makes the bound tight (and valid) for every angle.
    """
    gA = np.asarray(gA, dtype=float)
    gB = np.asarray(gB, dtype=float)
    c = np.abs(cos_theta)
    rhs = (np.sqrt(np.clip(1.0 - gA, 0.0, None)) * np.sqrt(np.clip(1.0 - gB, 0.0, None)) - c) ** 2
    return gA * gB - rhs


# -- relations -------------------------------------------------------------


def robertson(ctx: RelationContext) -> RelationReport:
    """Delta A Delta B >= |<C>| with [A, B] = 2iC.  lhs = |<C>|, rhs = Delta A Delta B."""
    _need(ctx, 2)
    a, b = ctx.obs[:2]
    c = abs(expectation(ctx.rho, commutator_half_i(a.matrix, b.matrix)))
    prod = np.sqrt(variance(ctx.rho, a) * variance(ctx.rho, b))
    return _inequality("robertson", c, prod, prod - c)


def maassen_uffink(ctx: RelationContext) -> RelationReport:
    """H(A) + H(B) >= -2 ln c_ab with Shannon entropies.  lhs is the bound."""
    _need(ctx, 2)
    a, b = ctx.obs[:2]
    bound = -2.0 * np.log(ctx.c_ab)
    h = renyi_entropy(born_probabilities(ctx.rho, a).probs, 1.0) + renyi_entropy(
        born_probabilities(ctx.rho, b).probs, 1.0
    )
    return _inequality("maassen_uffink", bound, h, h - bound)


def _xlogx_product(ap, am):
    # a^a with 0^0 = 1
    return float(np.prod([x**x if x > 0 else 1.0 for x in (ap, am)]))


def mu_variance_form(ctx: RelationContext) -> RelationReport:
    """a+^a+ a-^a- b+^b+ b-^b- <= c_ab^2, the variance form of Maassen-Uffink."""
    _need_qubit(ctx)
    a, b = ctx.obs[:2]
    ap, am = (float(x) for x in qubit_probabilities(normalized_variance(ctx.rho, a)))
    bp, bm = (float(x) for x in qubit_probabilities(normalized_variance(ctx.rho, b)))
    lhs = _xlogx_product(ap, am) * _xlogx_product(bp, bm)
    rhs = ctx.c_ab**2
    return _inequality("mu_variance", lhs, rhs, rhs - lhs)


def majorization_variance(ctx: RelationContext) -> RelationReport:
    """(1 + sqrt(1 - V_A))(1 + sqrt(1 - V_B)) <= (1 + c_ab)^2."""
    _need_qubit(ctx)
    a, b = ctx.obs[:2]
    va = normalized_variance(ctx.rho, a)
    vb = normalized_variance(ctx.rho, b)
    lhs = (1.0 + np.sqrt(1.0 - va)) * (1.0 + np.sqrt(1.0 - vb))
    rhs = (1.0 + ctx.c_ab) ** 2
    return _inequality("majorization_variance", lhs, rhs, rhs - lhs)


def full_qubit_terms(a2, b2, kappa, p2, gA, gB):
    """Both sides of [a^2(p^2-1)+g_A][b^2(p^2-1)+g_B] >= [sqrt(a^2-g_A) sqrt(b^2-g_B) - |kappa| p^2]^2.

    ``gA`` and ``gB`` are variances in the units of A and B (not normalised).
    Vectorises over numpy arrays.
    """
    gA = np.asarray(gA, dtype=float)
    gB = np.asarray(gB, dtype=float)
    if np.any(gA > a2 + 1e-10) or np.any(gB > b2 + 1e-10):
        raise DomainError("variance exceeds Tr[A^2]/2; square root argument negative")
    lhs = (a2 * (p2 - 1.0) + gA) * (b2 * (p2 - 1.0) + gB)
    rhs = (np.sqrt(np.clip(a2 - gA, 0.0, None)) * np.sqrt(np.clip(b2 - gB, 0.0, None)) - abs(kappa) * p2) ** 2
    return lhs, rhs


def full_qubit_bound(ctx: RelationContext, variance_first: bool = False) -> RelationReport:
    """Qubit entropic relation in variance language, for any state and indices alpha, beta.

    By default g_alpha(A), g_beta(B) come from the measured Renyi entropies;
    ``variance_first=True`` uses the variances directly.
    """
    _need_qubit(ctx)
    a, b = ctx.obs[:2]
    if variance_first:
        ga, gb = normalized_variance(ctx.rho, a), normalized_variance(ctx.rho, b)
    else:
        ga = entropic_variance(ctx.rho, a, ctx.alpha(0))
        gb = entropic_variance(ctx.rho, b, ctx.alpha(1))
    a2, b2 = ctx.a2, ctx.b2
    lhs, rhs = full_qubit_terms(a2, b2, ctx.kappa, ctx.p2, ga * a2, gb * b2)
    return _inequality("full_qubit", lhs, rhs, lhs - rhs)


def qubit_simple_bound(ctx: RelationContext) -> RelationReport:
    """Pure-state form g(A) g(B) >= [sqrt(1-g(A)) sqrt(1-g(B)) - cos theta_ab]^2.

    Mixed states lie inside the pure-state region, so they are accepted too.
    """
    _need_qubit(ctx)
    a, b = ctx.obs[:2]
    ga = entropic_variance(ctx.rho, a, ctx.alpha(0))
    gb = entropic_variance(ctx.rho, b, ctx.alpha(1))
    slack = float(htov_simple_slack(ga, gb, ctx.cos_theta))
    return _inequality("qubit_simple", ga * gb, ga * gb - slack, slack)


_PAULI_AXES = np.eye(3)


def _pauli_triple_obs(ctx):
    if ctx.rho.dim != 2:
        raise NotQubit("relation is defined for qubits")
    if len(ctx.obs) >= 3:
        obs = ctx.obs[:3]
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(np.trace(obs[i].matrix @ obs[j].matrix)) > 1e-9:
                    raise DomainError("the three observables must be mutually orthogonal")
        return obs
    return tuple(pauli_operator(ax) for ax in _PAULI_AXES)


def pauli_triple_equality(ctx: RelationContext) -> RelationReport:
    """g_alpha(sx) + g_beta(sy) + g_gamma(sz) = 4 - 2 Tr[rho^2] (unit-scale variances).

    Variances are returned in units of the observables (factor lambda^2),
    which for Pauli matrices is 1.
    """
    obs = _pauli_triple_obs(ctx)
    total = 0.0
    for i, o in enumerate(obs):
        lam = qubit_half_gap(o)
        total += lam * lam * entropic_variance(ctx.rho, o, ctx.alpha(i))
    coll = _collision_sum(ctx, obs)
    rep = _equality("pauli_triple", total, 4.0 - 2.0 * ctx.rho.purity, collision_residual=coll.residual)
    if coll.satisfied:
        return rep
    return dataclasses.replace(rep, satisfied=False, slack=min(rep.slack, coll.slack))


def _collision_sum(ctx, obs):
    total = sum(np.exp(-renyi_entropy(born_probabilities(ctx.rho, o).probs, 2.0)) for o in obs)
    return _equality("pauli_collision", total, 1.0 + ctx.rho.purity)


def pauli_collision_equality(ctx: RelationContext) -> RelationReport:
    """exp(-H2(sx)) + exp(-H2(sy)) + exp(-H2(sz)) = 1 + Tr[rho^2]."""
    return _collision_sum(ctx, _pauli_triple_obs(ctx))


def _need_spin_one(ctx):
    _need(ctx, 2)
    for o in ctx.obs[:2]:
        if o.dim != 3 or not np.allclose(o.eigenvalues, [1.0, 0.0, -1.0], atol=1e-10):
            raise NotSpinOne("relation needs spin-1 components with spectrum {1, 0, -1}")


def spin1_collision_bound(ctx: RelationContext) -> RelationReport:
    """H2(J_a) + H2(J_b) >= c with c from the overlap c_ab.  lhs is the entropy sum.

    The variance form (see :func:`spin1_variance_bound`) is evaluated too and
    ``satisfied`` requires both.
    """
    _need_spin_one(ctx)
    a, b = ctx.obs[:2]
    c = puchala_constant(ctx.c_ab)
    h = renyi_entropy(born_probabilities(ctx.rho, a).probs, 2.0) + renyi_entropy(
        born_probabilities(ctx.rho, b).probs, 2.0
    )
    var = spin1_variance_bound(ctx)
    # both readings must hold; the reported slack is the tighter one
    return _inequality(
        "spin1_collision", h, c, min(h - c, var.slack), entropic_slack=h - c, variance_slack=var.slack
    )


def spin1_variance_term(rho: DensityMatrix, a: Observable) -> float:
    """2 - V(J) - 3 V(J^2), which equals 2 exp(-H2(J)) for spin 1."""
    j2 = a.matrix @ a.matrix
    e2 = expectation(rho, j2)
    return 2.0 - variance(rho, a) - 3.0 * (expectation(rho, j2 @ j2) - e2 * e2)


def spin1_variance_bound(ctx: RelationContext) -> RelationReport:
    """[2 - V(J_a) - 3V(J_a^2)][2 - V(J_b) - 3V(J_b^2)] <= 4 exp(-c)."""
    _need_spin_one(ctx)
    a, b = ctx.obs[:2]
    lhs = spin1_variance_term(ctx.rho, a) * spin1_variance_term(ctx.rho, b)
    rhs = 4.0 * np.exp(-puchala_constant(ctx.c_ab))
    return _inequality("spin1_variance", lhs, rhs, rhs - lhs)


@dataclass(frozen=True)
class Relation:
    id: str
    evaluate: Callable[[RelationContext], RelationReport]
    system: str  # "qubit", "spin1" or "any"
    n_obs: int
    equality: bool = False
    pure_only: bool = False


RELATIONS: dict[str, Relation] = {
    r.id: r
    for r in (
        Relation("robertson", robertson, "any", 2),
        Relation("maassen_uffink", maassen_uffink, "any", 2),
        Relation("mu_variance", mu_variance_form, "qubit", 2),
        Relation("majorization_variance", majorization_variance, "qubit", 2),
        Relation("full_qubit", full_qubit_bound, "qubit", 2),
        Relation("qubit_simple", qubit_simple_bound, "qubit", 2, pure_only=True),
        Relation("pauli_triple", pauli_triple_equality, "qubit", 3, equality=True),
        Relation("pauli_collision", pauli_collision_equality, "qubit", 3, equality=True),
        Relation("spin1_collision", spin1_collision_bound, "spin1", 2),
        Relation("spin1_variance", spin1_variance_bound, "spin1", 2),
    )
}


def get_relation(relation_id: str) -> Relation:
    try:
        return RELATIONS[relation_id]
    except KeyError:
        raise UnknownRelation(f"unknown relation {relation_id!r}") from None


def evaluate(relation_id: str, ctx: RelationContext) -> RelationReport:
    return get_relation(relation_id).evaluate(ctx)
