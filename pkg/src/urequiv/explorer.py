"""Exploring state space: region sampling, multi-start minimisation, scans.

Everything is keyed by explicit seeds.  Per-relation random streams are
derived from ``(seed, crc32(relation_id))`` so a relation's samples do not
depend on which other relations are scanned alongside it.
"""

from __future__ import annotations

import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .entropy import qubit_variance_from_entropy, renyi_entropy, renyi_entropy_rows
from .errors import DegenerateObjective, InfeasibleTarget, NotQubit
from .observables import Observable, born_probabilities, pauli_operator, spin_operator
from .relations import (
    RELATIONS,
    SLACK_ATOL,
    Relation,
    RelationContext,
    get_relation,
    htov_simple_slack,
    puchala_constant,
)
from .states import (
    DensityMatrix,
    StateVector,
    pure_state,
    random_mixed_batch,
    random_pure_batch,
    random_unit_vector,
    rng_from_seed,
)

SIMPLEX_XATOL = 1e-10
PENALTY_WEIGHT = 1e6
BOUNDARY_ATOL = 1e-5


@dataclass(frozen=True, eq=False)
class RegionSample:
    """Sampled (H_A, H_B, purity) points and their containment check."""

    theta_ab: float
    points: np.ndarray
    violations: int
    worst_slack: float
    alpha: float = 1.0


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_value: float
    best_params: np.ndarray
    restarts: int
    evaluations: int
    converged: bool
    info: dict = field(default_factory=dict)

    @property
    def best_state(self) -> StateVector:
        return params_to_state(self.best_params)


def params_to_state(x) -> StateVector:
    """2*dim reals -> normalised complex vector (first half real parts)."""
    x = np.asarray(x, dtype=float)
    d = x.size // 2
    v = x[:d] + 1j * x[d:]
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        v = np.zeros(d, dtype=complex)
        v[0] = 1.0
        return StateVector(v)
    return StateVector(v / nrm)


def _theta_between(a: Observable, b: Observable) -> float:
    ctx = RelationContext(pure_state(np.eye(a.dim)[0]), (a, b))
    return ctx.theta_ab, ctx.cos_theta


def map_region(a: Observable, b: Observable, n: int, seed: int, alpha: float = 1.0) -> RegionSample:
    """Sample ``n`` Haar pure qubit states and record (H_alpha(A), H_alpha(B)).

    Each point is checked against the pure-state qubit relation
    g(A) g(B) >= (sqrt(1-g(A)) sqrt(1-g(B)) - cos theta_ab)^2.
    """
    if a.dim != 2 or b.dim != 2:
        raise NotQubit("region maps are drawn for qubit observables")
    theta, cos_t = _theta_between(a, b)
    if n <= 0:
        return RegionSample(theta, np.empty((0, 3)), 0, np.inf, alpha)
    psi = random_pure_batch(2, n, rng_from_seed(seed))
    pa = np.abs(psi @ a.eigenvectors.conj()) ** 2
    pb = np.abs(psi @ b.eigenvectors.conj()) ** 2
    ha = renyi_entropy_rows(pa, alpha)
    hb = renyi_entropy_rows(pb, alpha)
    slack = htov_simple_slack(
        qubit_variance_from_entropy(ha, alpha), qubit_variance_from_entropy(hb, alpha), cos_t
    )
    purity = np.sum(np.abs(psi) ** 2, axis=1) ** 2
    pts = np.column_stack([ha, hb, purity])
    return RegionSample(theta, pts, int(np.sum(slack < -SLACK_ATOL)), float(slack.min()), alpha)


def minimize_over_pure(
    objective: Callable[[StateVector], float],
    dim: int,
    restarts: int = 64,
    seed: int = 0,
    maxfev: int | None = None,
) -> OptimizationResult:
    """Multi-start Nelder-Mead over unnormalised 2*dim real parameters.

    A restart counts as converged once its simplex diameter is below 1e-10.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = rng_from_seed(seed)
    maxfev = maxfev or 4000 * dim

    def f(x):
        return float(objective(params_to_state(x)))

    best = None
    evals = 0
    moved = False
    all_converged = True
    for _ in range(restarts):
        x0 = rng.standard_normal(2 * dim)
        f0 = f(x0)
        res = minimize(
            f,
            x0,
            method="Nelder-Mead",
            options={"xatol": SIMPLEX_XATOL, "fatol": np.inf, "maxfev": maxfev, "adaptive": dim > 2},
        )
        evals += res.nfev + 1
        moved |= abs(res.fun - f0) > 1e-15
        all_converged &= bool(res.success)
        if best is None or res.fun < best.fun:
            best = res
    if not moved:
        raise DegenerateObjective("no restart changed the objective value")
    x = np.array(best.x, copy=True)
    return OptimizationResult(f(x), x, restarts, evals, all_converged)


def variance_sum_objective(*obs: Observable) -> Callable[[StateVector], float]:
    """psi -> sum of Var(A_i) in the pure state psi."""
    mats = [(o.matrix, o.matrix @ o.matrix) for o in obs]

    def obj(psi: StateVector) -> float:
        v = psi.amplitudes
        total = 0.0
        for m, m2 in mats:
            mean = np.vdot(v, m @ v).real
            total += np.vdot(v, m2 @ v).real - mean * mean
        return total

    return obj


def _binary_entropy(p: float, alpha: float) -> float:
    q = 1.0 - p
    if abs(alpha - 1.0) < 1e-6:
        return -sum(x * math.log(x) for x in (p, q) if x > 0.0)
    return math.log(p**alpha + q**alpha) / (1.0 - alpha)


def _qubit_split(v, a: Observable):
    """Amplitudes of ``v`` on the eigenvectors of a qubit observable."""
    u = a.eigenvectors
    return (
        u[0, 0].conjugate() * v[0] + u[1, 0].conjugate() * v[1],
        u[0, 1].conjugate() * v[0] + u[1, 1].conjugate() * v[1],
    )


def _pin_coordinate(v, a: Observable) -> float:
    """|p_+ - p_-| of A in the pure state v; H(A) is a decreasing function of it."""
    cp, cm = _qubit_split(v, a)
    return abs(abs(cp) ** 2 - abs(cm) ** 2) / (abs(cp) ** 2 + abs(cm) ** 2)


def _project_onto_pin(v, a: Observable, x_t: float) -> np.ndarray:
    """Rescale the A-eigenbasis moduli of v so that |p_+ - p_-| = x_t, keeping phases."""
    cp, cm = _qubit_split(v, a)
    sign = 1.0 if abs(cp) >= abs(cm) else -1.0
    mp = math.sqrt((1.0 + sign * x_t) / 2.0)
    mm = math.sqrt((1.0 - sign * x_t) / 2.0)
    php = cp / abs(cp) if abs(cp) > 0 else 1.0
    phm = cm / abs(cm) if abs(cm) > 0 else 1.0
    u = a.eigenvectors
    return mp * php * u[:, 0] + mm * phm * u[:, 1]


def saturate_boundary(
    a: Observable,
    b: Observable,
    target_HA: float,
    restarts: int = 8,
    seed: int = 0,
    alpha: float = 1.0,
) -> OptimizationResult:
    """Minimise H(B) over pure qubit states with H(A) pinned at ``target_HA``.

    H(A) = t is equivalent to |p_+ - p_-| = x_t for the eigen-probabilities
    of A, and that coordinate is smooth where H(A) is not (at t = ln 2).
    The pin is a quadratic penalty on it, raised to weight 1e6 in three
    warm-started stages; the minimiser is then projected exactly onto the
    pin.  ``info`` carries the achieved entropies and ``boundary_residual``,
    the slack of the pure-state qubit relation there (zero on the boundary).
    """
    if a.dim != 2 or b.dim != 2:
        raise NotQubit("boundary saturation is implemented for qubits")
    if not -1e-12 <= target_HA <= math.log(2) + 1e-12:
        raise InfeasibleTarget(f"H(A) = {target_HA} is outside [0, ln 2]")
    target_HA = min(max(target_HA, 0.0), math.log(2))
    x_t = math.sqrt(max(0.0, 1.0 - float(qubit_variance_from_entropy(target_HA, alpha))))
    _, cos_t = _theta_between(a, b)

    def penalised(weight):
        def obj(psi: StateVector) -> float:
            v = psi.amplitudes
            cp, _ = _qubit_split(v, b)
            h_b = _binary_entropy(min(abs(cp) ** 2, 1.0), alpha)
            return h_b + weight * (_pin_coordinate(v, a) - x_t) ** 2

        return obj

    stage = minimize_over_pure(penalised(1e2), 2, restarts=restarts, seed=seed)
    x, evals = stage.best_params, stage.evaluations
    for weight in (1e4, PENALTY_WEIGHT):
        obj = penalised(weight)
        r = minimize(
            lambda y: obj(params_to_state(y)),
            x,
            method="Nelder-Mead",
            options={"xatol": SIMPLEX_XATOL, "fatol": np.inf, "maxfev": 4000},
        )
        x, evals = r.x, evals + r.nfev
    v = _project_onto_pin(params_to_state(x).amplitudes, a, x_t)
    x = np.concatenate([v.real, v.imag])
    ha = renyi_entropy(np.abs(a.eigenvectors.conj().T @ v) ** 2, alpha)
    hb = renyi_entropy(np.abs(b.eigenvectors.conj().T @ v) ** 2, alpha)
    resid = float(
        htov_simple_slack(
            qubit_variance_from_entropy(ha, alpha), qubit_variance_from_entropy(hb, alpha), cos_t
        )
    )
    info = {
        "target_h_a": float(target_HA),
        "h_a": ha,
        "h_b": hb,
        "pin_error": abs(ha - target_HA),
        "boundary_residual": resid,
    }
    ok = info["pin_error"] < 1e-6 and abs(resid) < BOUNDARY_ATOL
    final = penalised(PENALTY_WEIGHT)
    return OptimizationResult(final(params_to_state(x)), x, restarts, evals, ok, info)


def spin1_inequality_region_minimum(
    c_ab: float = 1.0 / math.sqrt(2.0), restarts: int = 64, seed: int = 0
) -> OptimizationResult:
    """min V(J_a) + V(J_b) allowed by the spin-1 variance-form inequality alone.

    The two outcome distributions p, q on {1, 0, -1} are treated as
    independent and coupled only through
    [2 - V(J_a) - 3V(J_a^2)][2 - V(J_b) - 3V(J_b^2)] = 4 sum(p^2) sum(q^2) <= 4 exp(-c).
    This is a relaxation of the state-space problem solved by
    :func:`minimize_over_pure`, so its value is a lower bound on that one
    and need not reach it.  Solved with multi-start SLSQP on the simplices.
    """
    bound = math.exp(-puchala_constant(c_ab))

    def var(p):
        return p[0] + p[2] - (p[0] - p[2]) ** 2

    def obj(x):
        return var(x[:3]) + var(x[3:])

    cons = (
        {"type": "eq", "fun": lambda x: np.array([x[:3].sum() - 1.0, x[3:].sum() - 1.0])},
        {"type": "ineq", "fun": lambda x: bound - np.dot(x[:3], x[:3]) * np.dot(x[3:], x[3:])},
    )
    rng = rng_from_seed(seed)
    best, evals = None, 0
    for _ in range(restarts):
        x0 = np.concatenate([rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))])
        r = minimize(obj, x0, method="SLSQP", bounds=[(0.0, 1.0)] * 6, constraints=cons,
                     options={"ftol": 1e-14, "maxiter": 500})
        evals += r.nfev
        feasible = bound - np.dot(r.x[:3], r.x[:3]) * np.dot(r.x[3:], r.x[3:]) >= -1e-12
        if r.success and feasible and (best is None or r.fun < best.fun):
            best = r
    if best is None:
        raise DegenerateObjective("no restart reached a feasible point")
    x = np.array(best.x, copy=True)
    return OptimizationResult(obj(x), x, restarts, evals, True, {"p_a": x[:3], "p_b": x[3:]})


# -- violation scans ---------------------------------------------------------

_ALPHAS = (0.5, 1.0, 2.0, 3.0)


def relation_rng(seed: int, relation_id: str) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed), zlib.crc32(relation_id.encode())])
    return np.random.Generator(np.random.Philox(ss))


def sample_context(
    rel: Relation, rng: np.random.Generator, i: int, alphas: Sequence[float] | None = None
) -> RelationContext:
    """Random context suited to ``rel``; even ``i`` draws pure states, odd mixed.

    Renyi indices are drawn from {0.5, 1, 2, 3} unless ``alphas`` fixes them.
    """
    system = rel.system
    if system == "any":
        system = "qubit" if i % 4 < 2 else "spin1"
    dim = 2 if system == "qubit" else 3
    if rel.pure_only or i % 2 == 0:
        rho = pure_state(random_pure_batch(dim, 1, rng)[0])
    else:
        rho = DensityMatrix(random_mixed_batch(dim, 1, rng)[0])
    if system == "qubit":
        if rel.n_obs == 3:
            # a random orthonormal frame
            q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
            obs = tuple(pauli_operator(q[:, k]) for k in range(3))
        else:
            obs = tuple(pauli_operator(random_unit_vector(rng)) for _ in range(rel.n_obs))
    else:
        obs = tuple(spin_operator(2, random_unit_vector(rng)) for _ in range(rel.n_obs))
    drawn = tuple(float(rng.choice(_ALPHAS)) for _ in range(3))
    return RelationContext(rho, obs, drawn if alphas is None else tuple(alphas))


def scan_relation(rel: Relation, n: int, seed: int, alphas: Sequence[float] | None = None) -> dict:
    rng = relation_rng(seed, rel.id)
    worst = np.inf
    violations = 0
    for i in range(n):
        rep = rel.evaluate(sample_context(rel, rng, i, alphas))
        worst = min(worst, rep.slack)
        violations += not rep.satisfied
    return {
        "id": rel.id,
        "n": int(n),
        "worst_slack": float(worst) if n else None,
        "violations": int(violations),
    }


@dataclass(frozen=True)
class ScanSummary:
    seed: int
    n: int
    relations: list

    @property
    def total_violations(self) -> int:
        return sum(r["violations"] for r in self.relations)


def worker_count() -> int:
    """Cap from UR_EQUIV_THREADS (0 or unset means one per CPU)."""
    raw = os.environ.get("UR_EQUIV_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"UR_EQUIV_THREADS must be a non-negative integer, got {raw!r}") from None
    if k < 0:
        raise ValueError(f"UR_EQUIV_THREADS must be a non-negative integer, got {raw!r}")
    return k if k > 0 else (os.cpu_count() or 1)


def scan_violations(
    relation_ids: Sequence[str],
    n: int,
    seed: int,
    registry: Mapping[str, Relation] | None = None,
    workers: int | None = None,
    alphas: Sequence[float] | None = None,
) -> ScanSummary:
    """Evaluate each relation on ``n`` seeded random contexts.

    ``registry`` overrides the built-in relations (used to inject corrupted
    bounds when checking that the detector fires).  Output order follows
    ``relation_ids`` regardless of the worker count.
    """
    reg = RELATIONS if registry is None else registry
    rels = []
    for rid in relation_ids:
        rels.append(reg[rid] if rid in reg else get_relation(rid))
    if n <= 0 or not rels:
        return ScanSummary(int(seed), max(int(n), 0), [])
    workers = min(workers or worker_count(), len(rels))
    if workers <= 1:
        rows = [scan_relation(r, n, seed, alphas) for r in rels]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda r: scan_relation(r, n, seed, alphas), rels))
    return ScanSummary(int(seed), int(n), rows)
